#include <doctest.h>

#include <functional>

#include "lbx/comp.hpp"
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

TEST_CASE("comp rules") {
  // id-let and betav-let overlap on let x = V in x
  auto s1 = redexes(T("let x = c:p in x"), Calc::CompC);
  CHECK(has_rule(s1, Rule::IdLet));
  CHECK(has_rule(s1, Rule::BetaLetV));
  for (const auto& s : s1) CHECK(alpha_eq(s.result, T("c:p")));

  // let-intro on C[A] with A a non-value
  TypingContext ctx;
  ctx.push("y", parse_type("p -> q -> q"));
  ctx.push("z", parse_type("p"));
  ctx.push("m", parse_type("q"));
  auto s2 = redexes(T("(y z) m"), Calc::CompC, ctx);
  REQUIRE(has_rule(s2, Rule::LetIntro));
  for (const auto& s : s2)
    if (s.rule == Rule::LetIntro)
      CHECK(alpha_eq(s.result, T("let x = y z in x m")));

  // comp reassociates nested lets
  TypingContext ctx2;
  ctx2.push("f", parse_type("p -> p"));
  ctx2.push("u", parse_type("p"));
  auto s3 = redexes(T("let x = (let y = f u in f y) in \\w:q. x"), Calc::CompC,
                    ctx2);
  REQUIRE(has_rule(s3, Rule::CompLet));
  for (const auto& s : s3)
    if (s.rule == Rule::CompLet)
      CHECK(alpha_eq(s.result,
                     T("let y = f u in let x = f y in \\w:q. x")));

  // the comp side condition freshens the inner binder when it collides
  auto t = Term::make_let(
      "x", Term::make_let("y", T("f u"), T("f y")),
      Term::make_app(Term::make_var("y"), Term::make_var("x")));
  TypingContext ctx3;
  ctx3.push("f", parse_type("p -> p"));
  ctx3.push("u", parse_type("p"));
  ctx3.push("y", parse_type("p -> q"));
  for (const auto& s : redexes(t, Calc::CompC, ctx3))
    if (s.rule == Rule::CompLet) {
      CHECK(check_subject_reduction(ctx3, t, s.result));
      CHECK(free_vars(s.result) == free_vars(t));
    }

  // no let-intro loop: the normal form of (y z) m is reached
  auto r = normalize(T("(y z) m"), Calc::CompC, 1000, ctx);
  CHECK_FALSE(r.fuel_exhausted);
  CHECK(alpha_eq(r.term, T("let x = y z in x m")));
}

TEST_CASE("comp critical pairs join") {
  for (const auto& cp : comp_critical_pair_suite()) {
    INFO(cp.name);
    CHECK(cp.joined);
  }
}

TEST_CASE("let encode") {
  CHECK(alpha_eq(comp::let_encode({}, T("let x = c:p in x")),
                 T("(\\x:p. x) (c:p)")));
  CHECK(alpha_eq(
      comp::let_encode({}, T("let x = c:p in let y = c:q in x")),
      T("(\\x:p. (\\y:q. x) (c:q)) (c:p)")));
}

TEST_CASE("floor eliminates boxes") {
  TypingContext ctx;
  ctx.push("y", parse_type("p -> []p"));
  ctx.push("z", parse_type("p"));
  ctx.push("v", parse_type("[]p"));

  CHECK(alpha_eq(comp::floor(T("box [x:p] <- [v] in x")), T("v")));
  CHECK(alpha_eq(comp::floor(T("box [x:p] <- [y z] in x")),
                 T("let w = y z in w")));

  gen::GenConfig cfg;
  cfg.max_size = 14;
  cfg.calculus = Calc::CompC;
  cfg.restricted = true;
  for (int i = 0; i < 120; ++i) {
    cfg.seed = 51000 + i;
    auto [c, t] = gen::gen_term(cfg);
    auto f = comp::floor(t);
    // output is box-free
    std::function<void(const TermPtr&)> no_box = [&](const TermPtr& u) {
      CHECK(u->kind != Term::Kind::BoxIn);
      for (int j = 0; j < child_count(u); ++j) no_box(child_at(u, j));
    };
    no_box(f);
    // floor preserves values
    if (is_value(t)) CHECK(is_value(f));
  }
}

TEST_CASE("comp simulation under floor") {
  // Box steps map to zero or more comp steps of the floor images; the
  // remaining rules map to a bounded number (argument substitution can
  // duplicate or drop a redex).
  gen::GenConfig cfg;
  cfg.max_size = 12;
  cfg.calculus = Calc::CompC;
  cfg.restricted = true;
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    cfg.seed = 61000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    auto ft = comp::floor(t);
    for (const auto& s : redexes(t, Calc::CompC, ctx)) {
      auto fn = comp::floor(s.result);
      int r = reachable(ft, fn, Calc::CompC, {}, 20, 20000, ctx);
      CHECK(r == 1);
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("comp equality agrees with cbv on let-free terms") {
  gen::GenConfig cfg;
  cfg.max_size = 12;
  cfg.calculus = Calc::Cbv;  // let-free output
  cfg.restricted = true;
  for (int i = 0; i < 60; ++i) {
    cfg.seed = 71000 + i;
    auto [ctx, t, u] = gen::gen_pair(cfg);
    CHECK(calc_eq(t, u, Calc::CompC, kDefaultFuel, ctx) ==
          calc_eq(t, u, Calc::Cbv, kDefaultFuel, ctx));
  }
}
