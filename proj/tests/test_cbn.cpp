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

TEST_CASE("cbn redex enumeration") {
  auto s1 = redexes(T("(\\x:p. x) (c:p)"), Calc::Cbn);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].rule == Rule::BetaArrow);
  CHECK(alpha_eq(s1[0].result, T("c:p")));

  TypingContext ctx;
  ctx.push("y", parse_type("[]p"));
  auto s2 = redexes(T("box [x:p] <- [y] in x"), Calc::Cbn, ctx);
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].rule == Rule::IdBox);
  CHECK(alpha_eq(s2[0].result, T("y")));

  // beta-arrow fires on non-value arguments under cbn
  auto s3 = redexes(T("(\\x:p. c:q) (y z)"), Calc::Cbn);
  CHECK(has_rule(s3, Rule::BetaArrow));

  // eta
  auto s4 = redexes(T("\\x:p. (c:p -> q) x"), Calc::Cbn);
  CHECK(has_rule(s4, Rule::EtaArrow));
  // no eta when the bound variable occurs in the head
  auto s6 = redexes(T("\\x:p -> p. x x"), Calc::Cbn);
  CHECK_FALSE(has_rule(s6, Rule::EtaArrow));
}

TEST_CASE("inner box admits both id-box and beta-box") {
  TypingContext ctx;
  ctx.push("l", parse_type("[]p"));
  auto t = T("box [x:p] <- [box [y:p] <- [l] in y] in \\w:q. x");
  auto steps = redexes(t, Calc::Cbn, ctx);
  CHECK(has_rule(steps, Rule::IdBox));
  CHECK(has_rule(steps, Rule::BetaBox));
  CHECK(calc_eq(steps[0].result, steps[1].result, Calc::Cbn, kDefaultFuel, ctx));
}

TEST_CASE("beta-box merges and freshens") {
  TypingContext ctx;
  ctx.push("l", parse_type("[]p"));
  // the inner binder name collides with an outer binder
  auto t = T("box [x:p, w:q] <- [box [w:p] <- [l] in w, m:[]q] in \\u:p. x");
  auto steps = redexes(t, Calc::Cbn, ctx);
  REQUIRE(has_rule(steps, Rule::BetaBox));
  for (const auto& s : steps) {
    if (s.rule != Rule::BetaBox) continue;
    CHECK(s.result->kind == Term::Kind::BoxIn);
    REQUIRE(s.result->binders.size() == 2);
    CHECK(s.result->binders[0].name != s.result->binders[1].name);
    CHECK(check_subject_reduction(ctx, t, s.result));
  }
}

TEST_CASE("normalization") {
  // K axiom applied to two boxes
  TypingContext ctx;
  auto t = T(
      "(\\f:[](p -> p). \\x:[]p. box [f':p -> p, x':p] <- [f, x] in f' x') "
      "(box [] <- [] in \\z:p. z) (box [] <- [] in c:p)");
  auto r = normalize(t, Calc::Cbn, kDefaultFuel, ctx);
  CHECK(alpha_eq(r.term, T("box [] <- [] in c:p")));
  CHECK(r.steps > 0);

  auto r2 = normalize(T("\\x:p -> p. (\\y:p -> p. y) x"), Calc::Cbn);
  CHECK(alpha_eq(r2.term, T("\\x:p -> p. x")));

  TypingContext ctx3;
  ctx3.push("w", parse_type("[]p"));
  auto r3 =
      normalize(T("box [x:p] <- [box [y:p] <- [w] in y] in x"), Calc::Cbn,
                kDefaultFuel, ctx3);
  CHECK(alpha_eq(r3.term, T("w")));
}

TEST_CASE("cbn equality") {
  TypingContext ctx;
  ctx.push("m", parse_type("[]p"));
  ctx.push("n", parse_type("[]p"));
  ctx.push("l", parse_type("[]q"));
  CHECK(calc_eq(T("(\\x:[]p. x) m"), T("m"), Calc::Cbn, kDefaultFuel, ctx));
  // exchange is not provable by reduction
  CHECK_FALSE(calc_eq(T("box [x:p, y:q] <- [n, l] in \\u:p. x"),
                      T("box [y:q, x:p] <- [l, n] in \\u:p. x"), Calc::Cbn,
                      kDefaultFuel, ctx));
}

TEST_CASE("critical pair schemas join") {
  for (const auto& cp : critical_pair_suite()) {
    INFO(cp.name);
    CHECK(cp.joined);
  }
}

TEST_CASE("local confluence on generated terms") {
  gen::GenConfig cfg;
  cfg.max_size = 14;
  for (int i = 0; i < 120; ++i) {
    cfg.seed = 11000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    auto steps = redexes(t, Calc::Cbn, ctx);
    if (steps.size() < 2) continue;
    auto nf0 = normalize(steps[0].result, Calc::Cbn, kDefaultFuel, ctx).term;
    for (std::size_t j = 1; j < steps.size(); ++j)
      CHECK(alpha_eq(nf0,
                     normalize(steps[j].result, Calc::Cbn, kDefaultFuel, ctx).term));
  }
}

TEST_CASE("fuel exhaustion is reported") {
  auto t = T(
      "(\\f:[](p -> p). \\x:[]p. box [f':p -> p, x':p] <- [f, x] in f' x') "
      "(box [] <- [] in \\z:p. z) (box [] <- [] in c:p)");
  auto r = normalize(t, Calc::Cbn, 1);
  CHECK(r.fuel_exhausted);
  CHECK_THROWS_AS(calc_eq(t, t, Calc::Cbn, 1), FuelExhausted);
}
