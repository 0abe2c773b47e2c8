#include <doctest.h>

#include "lbx/cps.hpp"
#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/rules.hpp"

using namespace lbx;

static TermPtr T(const std::string& s) { return parse_term(s, ParseCpsVars); }

TEST_CASE("cps type translation") {
  CHECK(print_type(cps::cps_type(parse_type("p -> p"))) ==
        "(p -> R) -> p -> R");
  CHECK(print_type(cps::cps_type(parse_type("[]p"))) == "[]p");
  CHECK(print_type(cps::cps_type(parse_type("[](p -> p)"))) ==
        "[]((p -> R) -> p -> R)");
  // icps_type inverts the image
  for (const char* s : {"p", "p -> q", "[]p -> [](q -> p)", "[][]p"}) {
    auto ty = parse_type(s);
    CHECK(type_eq(cps::icps_type(cps::cps_type(ty)), ty));
  }
  CHECK_THROWS_AS(cps::icps_type(parse_type("p -> q")), cps::CpsError);
}

TEST_CASE("cps term translation") {
  TypingContext ctx;
  ctx.push("x", parse_type("p"));
  auto w = cps::cps_term(ctx, T("x"));
  CHECK(alpha_eq(w, T("\\%k:p -> R. %k x")));

  auto v = cps::cps_value({}, T("\\x:p. x"));
  CHECK(alpha_eq(v, T("\\%k:p -> R. \\x:p. (\\%k1:p -> R. %k1 x) %k")));

  CHECK_THROWS_AS(cps::cps_value({}, T("(\\x:p. x) (c:p)")), cps::CpsError);

  // Prop 5 typing contract on generated terms.
  gen::GenConfig cfg;
  cfg.max_size = 13;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  for (int i = 0; i < 120; ++i) {
    cfg.seed = 81000 + i;
    auto [c, t] = gen::gen_term(cfg);
    TypePtr tau = infer(c, t);
    TypePtr got = infer(cps::map_context(c, cps::cps_type), cps::cps_term(c, t));
    TypePtr want = Type::make_arrow(
        Type::make_arrow(cps::cps_type(tau), Type::make_atom(kAnswerAtom)),
        Type::make_atom(kAnswerAtom));
    CHECK(type_eq(got, want));
  }
}

TEST_CASE("administrative normal forms") {
  TypingContext ctx;
  ctx.push("x", parse_type("q -> p"));
  ctx.push("y", parse_type("q"));

  // <x, k> = k x; the oracle is plain beta-normalization of [[x]] k.
  auto a1 = cps::admin_nf(ctx, T("x"), "%k0");
  CHECK(alpha_eq(a1, T("%k0 x")));
  auto oracle = normalize(
      Term::make_app(cps::cps_term(ctx, T("x")), Term::make_var("%k0")),
      Calc::Cbn, kDefaultFuel);
  CHECK(alpha_eq(a1, oracle.term));

  // <x y, k> applies the function to the continuation first.
  auto a2 = cps::admin_nf(ctx, T("x y"), "%k0");
  CHECK(alpha_eq(a2, T("x %k0 y")));
  CHECK(cps::classify_cps(a2) == cps::CpsClass::Answer);
}

TEST_CASE("cps language classification") {
  CHECK(cps::classify_cps(T("\\%k:(p -> R). %k")) == cps::CpsClass::Value);
  CHECK(cps::classify_cps(T("%k x")) == cps::CpsClass::Answer);
  CHECK(cps::classify_cps(T("%k")) == cps::CpsClass::Continuation);
  CHECK(cps::classify_cps(T("x %k")) == cps::CpsClass::Continuation);
  CHECK_FALSE(cps::classify_cps(T("x y z")).has_value());
  CHECK_FALSE(cps::classify_cps(T("let x = c:p in x")).has_value());
}

TEST_CASE("icps clauses") {
  // icps(\k.k) = \x.x
  auto id = cps::icps(T("\\%k:p -> R. %k"));
  CHECK(alpha_eq(id, T("\\x:p. x")));
  // icps(k x) plugs the value into the hole
  CHECK(alpha_eq(cps::icps(T("%k x")), T("x")));
  // icps of a continuation is a context over the hole `_`
  CHECK(alpha_eq(cps::icps(T("x %k")),
                 Term::make_app(Term::make_var("x"), Term::make_var("_"))));
}

TEST_CASE("round trip by lift and flat") {
  // M ->lift,flat* icps(<M,k>) on generated restricted terms.
  gen::GenConfig cfg;
  cfg.max_size = 11;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  int done = 0;
  for (int i = 0; i < 60; ++i) {
    cfg.seed = 91000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    auto anf = cps::admin_nf(ctx, t, "%k0");
    TypingContext cps_ctx = cps::map_context(ctx, cps::cps_type);
    cps_ctx.push("%k0", Type::make_arrow(cps::cps_type(infer(ctx, t)),
                                         Type::make_atom(kAnswerAtom)));
    auto back = cps::icps(anf, cps_ctx);
    CHECK(reachable(t, back, Calc::Cbv, {Rule::Lift, Rule::Flat}, 40, 40000,
                    ctx) == 1);
    ++done;
  }
  CHECK(done == 60);
}

TEST_CASE("ceil translation") {
  TypingContext ctx;
  ctx.push("n", parse_type("[]p"));
  auto c1 = cps::ceil(ctx, T("box [x:p] <- [n] in x"));
  CHECK(alpha_eq(c1, T("\\k:p -> P0. n (\\x:p. k x)")));

  // each id-box image eta-reduces to the argument image
  CHECK(reachable(c1, cps::ceil(ctx, T("n")), Calc::Cbn,
                  {Rule::BetaArrow, Rule::EtaArrow}, 10, 5000, ctx,
                  /*at_least_one=*/true) == 1);

  // the box-in-box image beta-reduces to the merged image
  TypingContext ctx2;
  ctx2.push("l", parse_type("[]p"));
  auto big = T("box [x:q] <- [box [y:p] <- [l] in c:q] in \\w:p. x");
  auto merged_steps = redexes(big, Calc::Cbn, ctx2);
  for (const auto& s : merged_steps) {
    if (s.rule != Rule::BetaBox) continue;
    CHECK(reachable(cps::ceil(ctx2, big), cps::ceil(ctx2, s.result), Calc::Cbn,
                    {Rule::BetaArrow, Rule::EtaArrow}, 10, 5000, ctx2,
                    /*at_least_one=*/true) == 1);
  }

  // ceil of a let substitutes
  TypingContext ctx3;
  ctx3.push("f", parse_type("p -> q"));
  ctx3.push("u", parse_type("p"));
  CHECK(alpha_eq(cps::ceil(ctx3, T("let x = f u in \\w:p. x")),
                 T("\\w:p. f u")));

  // images typecheck under the translated context
  gen::GenConfig cfg;
  cfg.max_size = 12;
  for (int i = 0; i < 80; ++i) {
    cfg.seed = 101000 + i;
    auto [c, t] = gen::gen_term(cfg);
    TypePtr want = cps::ceil_type(infer(c, t));
    CHECK(type_eq(infer(cps::map_context(c, cps::ceil_type), cps::ceil(c, t)),
                  want));
  }
}

TEST_CASE("cpsx translation") {
  CHECK(print_type(cps::cpsx_type(parse_type("[]p"))) == "[]((p -> R) -> R)");

  // soundness on sampled steps of unrestricted terms
  gen::GenConfig cfg;
  cfg.max_size = 11;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = false;
  for (int i = 0; i < 40; ++i) {
    cfg.seed = 111000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    auto steps = redexes(t, Calc::Cbv, ctx);
    for (std::size_t j = 0; j < steps.size() && j < 3; ++j)
      CHECK(calc_eq(cps::cpsx_term(ctx, t), cps::cpsx_term(ctx, steps[j].result),
                    Calc::Cbn, kDefaultFuel));
  }

  // the incompleteness witness
  TermPtr a = parse_term(
      "box [x:p] <- [box [f:p -> p, u:p] <- [cf:[](p -> p), cu:[]p] in f u] "
      "in \\w:p -> p. x");
  TermPtr b = parse_term(
      "box [f:p -> p, u:p] <- [cf:[](p -> p), cu:[]p] in "
      "(\\x:p. \\w:p -> p. x) (f u)");
  CHECK(calc_eq(cps::cpsx_term({}, a), cps::cpsx_term({}, b), Calc::Cbn,
                kDefaultFuel));
  CHECK_FALSE(calc_eq(a, b, Calc::Cbv, kDefaultFuel));

  // with a value in place of the non-value body, the sources are equal
  TermPtr av = parse_term(
      "box [x:p -> p] <- [box [f:p -> p, u:p] <- [cf:[](p -> p), cu:[]p] in f] "
      "in \\w:q. x");
  TermPtr bv = parse_term(
      "box [f:p -> p, u:p] <- [cf:[](p -> p), cu:[]p] in "
      "(\\x:p -> p. \\w:q. x) f");
  CHECK(calc_eq(av, bv, Calc::Cbv, kDefaultFuel));
}

TEST_CASE("theorem 2 biconditional on samples") {
  gen::GenConfig cfg;
  cfg.max_size = 11;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  for (int i = 0; i < 60; ++i) {
    cfg.seed = 121000 + i;
    TypingContext ctx;
    TermPtr a, b;
    if (i % 2 == 0) {
      auto [c, t] = gen::gen_term(cfg);
      ctx = c;
      a = t;
      b = gen::random_rewrite(t, Calc::Cbv, 2, cfg.seed ^ 99, ctx);
    } else {
      auto [c, t, u] = gen::gen_pair(cfg);
      ctx = c;
      a = t;
      b = u;
    }
    CHECK(calc_eq(a, b, Calc::Cbv, kDefaultFuel, ctx) ==
          calc_eq(cps::cps_term(ctx, a), cps::cps_term(ctx, b), Calc::Cbn,
                  kDefaultFuel));
  }
}
