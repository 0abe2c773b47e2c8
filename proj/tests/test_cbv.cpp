#include <doctest.h>

#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/rules.hpp"

using namespace lbx;

static TermPtr T(const std::string& s) { return parse_term(s); }

static bool has_rule(const std::vector<Step>& steps, Rule r) {
  for (const auto& s : steps)
    if (s.rule == r) return true;
  return false;
}

TEST_CASE("value classifier") {
  CHECK(is_value(T("\\x:p. x")));
  CHECK(is_value(T("c:p")));
  CHECK(is_value(T("x")));
  CHECK_FALSE(is_value(T("x y")));
  CHECK_FALSE(is_value(T("box [x:p] <- [y z] in x")));
  CHECK(is_value(T("box [x:p] <- [w] in x")));
  // a box body need not be a value for the box to be one
  CHECK(is_value(T("box [x:p -> p] <- [w] in x x")));
  CHECK_FALSE(is_value(T("let x = c:p in x")));
}

TEST_CASE("restricted classifier") {
  CHECK(is_restricted(T("box [x:p -> p] <- [m] in \\y:p. x y")));
  CHECK_FALSE(is_restricted(T("box [x:p -> p, y:p] <- [m, n] in x y")));
  CHECK(is_restricted(T("(\\x:p. x) (y z)")));
  CHECK_FALSE(is_restricted(T("\\u:q. box [x:p -> p, y:p] <- [m, n] in x y")));
}

TEST_CASE("restrictedness is preserved by cbv steps") {
  gen::GenConfig cfg;
  cfg.max_size = 14;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  for (int i = 0; i < 150; ++i) {
    cfg.seed = 21000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    REQUIRE(is_restricted(t));
    for (const auto& s : redexes(t, Calc::Cbv, ctx)) {
      CHECK(is_restricted(s.result));
      CHECK(check_subject_reduction(ctx, t, s.result));
    }
  }
}

TEST_CASE("values closed under value substitution") {
  gen::GenConfig cfg;
  cfg.max_size = 10;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  for (int i = 0; i < 100; ++i) {
    cfg.seed = 31000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    if (!is_value(t)) continue;
    for (const auto& [x, ty] : ctx.entries()) {
      CHECK(is_value(substitute(t, x, T("\\u:p. u"))));
      CHECK(is_value(substitute(t, x, T("c:p"))));
    }
  }
}

TEST_CASE("cbv rules") {
  // id-arrow applies to any argument
  auto s1 = redexes(T("(\\x:p. x) (y z)"), Calc::Cbv);
  CHECK(has_rule(s1, Rule::IdArrow));
  CHECK_FALSE(has_rule(s1, Rule::BetaArrowV));

  // betav needs a value argument
  auto s2 = redexes(T("(\\x:p. c:q) (\\w:q. w)"), Calc::Cbv);
  CHECK(has_rule(s2, Rule::BetaArrowV));

  // lift: C[(\x.M)N] with C = - (w)
  auto s3 = redexes(T("((\\x:p. c:q -> q) (y z)) w"), Calc::Cbv);
  CHECK(has_rule(s3, Rule::Lift));
  for (const auto& s : s3)
    if (s.rule == Rule::Lift)
      CHECK(alpha_eq(s.result, T("(\\x:p. (c:q -> q) w) (y z)")));

  // flat: C[yM] with C != V-
  TypingContext ctx;
  ctx.push("y", parse_type("p -> q -> q"));
  ctx.push("z", parse_type("p"));
  ctx.push("w", parse_type("q"));
  auto s4 = redexes(T("(y z) w"), Calc::Cbv, ctx);
  CHECK(has_rule(s4, Rule::Flat));
  for (const auto& s : s4)
    if (s.rule == Rule::Flat)
      CHECK(alpha_eq(s.result, T("(\\x:q -> q. x w) (y z)")));
  // but not when the context is a value applied to the redex
  auto s5 = redexes(T("(\\u:q. u) (y z)"), Calc::Cbv,
                    [] {
                      TypingContext c;
                      c.push("y", parse_type("p -> q"));
                      c.push("z", parse_type("p"));
                      return c;
                    }());
  CHECK_FALSE(has_rule(s5, Rule::Flat));

  // betaOmega
  TypingContext ctx2;
  ctx2.push("m", parse_type("p -> q"));
  ctx2.push("y", parse_type("q -> p"));
  ctx2.push("z", parse_type("q"));
  auto s6 = redexes(T("(\\x:p. m x) (y z)"), Calc::Cbv, ctx2);
  CHECK(has_rule(s6, Rule::BetaOmega));
  for (const auto& s : s6)
    if (s.rule == Rule::BetaOmega) CHECK(alpha_eq(s.result, T("m (y z)")));

  // betav-box asks for value arguments left of the merged box and a value
  // body inside it
  TypingContext ctx3;
  ctx3.push("l", parse_type("[]p"));
  auto value_inner = T("box [x:p] <- [box [y:p] <- [l] in y] in \\w:q. x");
  CHECK(has_rule(redexes(value_inner, Calc::Cbv, ctx3), Rule::BetaBoxV));
  auto nonvalue_inner =
      T("box [x:p] <- [box [f:p -> p, y:p] <- [m, n] in f y] in \\w:q. x");
  CHECK_FALSE(has_rule(redexes(nonvalue_inner, Calc::Cbv, ctx3), Rule::BetaBoxV));
}

TEST_CASE("cbv normalization and equality") {
  CHECK(alpha_eq(normalize(T("(\\x:p. x) (c:p)"), Calc::Cbv).term, T("c:p")));

  TypingContext ctx;
  ctx.push("w", parse_type("[]p"));
  CHECK(alpha_eq(
      normalize(T("box [x:p] <- [box [y:p] <- [w] in y] in x"), Calc::Cbv,
                kDefaultFuel, ctx)
          .term,
      T("w")));

  TypingContext ctx2;
  ctx2.push("m", parse_type("p"));
  CHECK(calc_eq(T("(\\x:p. x) m"), T("m"), Calc::Cbv, kDefaultFuel, ctx2));

  // the eight rules keep restricted typable terms confluent
  gen::GenConfig cfg;
  cfg.max_size = 13;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  for (int i = 0; i < 100; ++i) {
    cfg.seed = 41000 + i;
    auto [c, t] = gen::gen_term(cfg);
    auto steps = redexes(t, Calc::Cbv, c);
    if (steps.size() < 2) continue;
    auto nf0 = normalize(steps[0].result, Calc::Cbv, kDefaultFuel, c).term;
    for (std::size_t j = 1; j < steps.size(); ++j)
      CHECK(alpha_eq(nf0,
                     normalize(steps[j].result, Calc::Cbv, kDefaultFuel, c).term));
  }
}
