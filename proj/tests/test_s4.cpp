#include <doctest.h>

#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/s4.hpp"
#include "lbx/typing.hpp"

using namespace lbx;

static TermPtr T(const std::string& s) { return parse_term(s); }

static TypingContext s4_ctx() {
  TypingContext ctx;
  ctx.push("n", parse_type("[]p"));
  ctx.push("l", parse_type("[]q"));
  return ctx;
}

TEST_CASE("constants and elaboration") {
  auto c = s4::make_counit(parse_type("p"));
  CHECK(print_term(c) == "counit@p");
  CHECK(print_type(c->ann) == "[]p -> p");
  auto d = s4::make_comult(parse_type("p"));
  CHECK(print_type(d->ann) == "[]p -> [][]p");

  // bare constants elaborate from the argument type
  auto ctx = s4_ctx();
  auto [ty, elab] = infer_elab(ctx, T("counit n"));
  CHECK(print_type(ty) == "p");
  CHECK(alpha_eq(elab, T("counit@p n")));
  auto [ty2, elab2] = infer_elab(ctx, T("comult n"));
  CHECK(print_type(ty2) == "[][]p");
  CHECK(alpha_eq(elab2, T("comult@p n")));

  // a bare constant without an application cannot type
  CHECK_THROWS_AS(infer(ctx, T("counit")), TypeError);
}

TEST_CASE("eps-delta collapses") {
  auto ctx = s4_ctx();
  auto r = s4::eq_bounded(s4::TheoryAll, T("counit (comult n)"), T("n"), 1000,
                          ctx);
  CHECK(r.proven);
  CHECK(r.path_length <= 4);
  CHECK(!r.trace.empty());
}

TEST_CASE("nat-eps with one binder") {
  auto ctx = s4_ctx();
  auto r = s4::eq_bounded(s4::TheoryS4, T("counit (box [x:p] <- [n] in x)"),
                          T("counit n"), 1000, ctx);
  CHECK(r.proven);
  CHECK(r.path_length <= 2);
}

TEST_CASE("exchange needs symmetricity") {
  auto ctx = s4_ctx();
  auto a = T("box [x:p, y:q] <- [n, l] in (c:p -> q -> p) x y");
  auto b = T("box [y:q, x:p] <- [l, n] in (c:p -> q -> p) x y");
  CHECK(s4::eq_bounded(s4::TheoryAll, a, b, 1000, ctx).proven);
  CHECK_FALSE(
      s4::eq_bounded(s4::TheoryAll & ~s4::TheorySym, a, b, 1000, ctx).proven);
}

TEST_CASE("strongness weakening and contraction") {
  auto ctx = s4_ctx();
  // weakening: an unused column may be dropped
  CHECK(s4::eq_bounded(s4::TheoryAll,
                       T("box [x:p, u:q] <- [n, l] in x"),
                       T("box [x:p] <- [n] in x"), 1000, ctx)
            .proven);
  // contraction merges duplicated columns
  CHECK(s4::eq_bounded(
            s4::TheoryAll,
            T("box [x:p, y:p] <- [n, n] in (c:p -> p -> q) x y"),
            T("box [x:p] <- [n] in (c:p -> p -> q) x x"), 1000, ctx)
            .proven);
}

TEST_CASE("boxsub and unbox macros") {
  auto ctx = s4_ctx();
  // unbox(boxsub [x] <- [n] in x) = n
  TermPtr lhs = s4::unbox(s4::boxsub({{"x", parse_type("p")}},
                                     {Term::make_var("n")}, Term::make_var("x")));
  auto r = s4::eq_bounded(s4::TheoryAll, lhs, T("n"), 5000, ctx);
  CHECK(r.proven);

  // zero binders
  TermPtr z = s4::boxsub({}, {}, T("c:p"));
  CHECK(alpha_eq(z, T("box [] <- [] in c:p")));

  // typing: boxsub [x:sigma] <- [N:[]sigma] in (M:tau) : []tau
  TermPtr bs = s4::boxsub({{"x", parse_type("p")}}, {Term::make_var("n")},
                          Term::make_app(T("c:[]p -> q"), Term::make_var("x")));
  CHECK(print_type(infer(ctx, bs)) == "[]q");
}

TEST_CASE("dual-context typing") {
  TypingContext delta, gamma;
  gamma.push("x", parse_type("[]p"));
  CHECK(print_type(s4::dual_infer(delta, gamma, parse_dual("x"))) == "[]p");

  TypingContext delta2;
  delta2.push("a", parse_type("p"));
  CHECK(print_type(s4::dual_infer(delta2, {}, parse_dual("boxup @a"))) == "[]p");

  // floorx(delta) types at []sigma -> [][]sigma
  auto d = parse_dual("\\x:[]p. let box a = x in boxup boxup @a");
  CHECK(print_type(s4::dual_infer({}, {}, d)) == "[]p -> [][]p");

  // modal/ordinary confusion gets a dedicated diagnostic
  CHECK_THROWS_AS(s4::dual_infer(delta2, {}, parse_dual("a")),
                  s4::DualTypeError);
  CHECK_THROWS_AS(s4::dual_infer({}, gamma, parse_dual("@x")),
                  s4::DualTypeError);
  // a box body may not use ordinary variables
  CHECK_THROWS_AS(s4::dual_infer({}, gamma, parse_dual("boxup x")),
                  s4::DualTypeError);
}

TEST_CASE("dual equalities") {
  TypingContext gamma;
  gamma.push("n", parse_type("p"));
  gamma.push("m", parse_type("[]p"));

  // let box a = boxup n ... reduces by substitution
  auto e1 = s4::dual_eq_bounded(parse_dual("let box a = boxup c:p in boxup @a"),
                                parse_dual("boxup c:p"), 2000);
  CHECK(e1.proven);

  // let box a = M in boxup @a = M
  auto e2 = s4::dual_eq_bounded(parse_dual("let box a = m in boxup @a"),
                                parse_dual("m"), 2000);
  CHECK(e2.proven);

  // commuting conversion with C = (\y.y) -
  auto e3 = s4::dual_eq_bounded(
      parse_dual("(\\y:[]q. y) (let box a = m in boxup c:q)"),
      parse_dual("let box a = m in (\\y:[]q. y) (boxup c:q)"), 4000);
  CHECK(e3.proven);
}

TEST_CASE("dual round trip") {
  auto ctx = s4_ctx();
  auto check_roundtrip = [&](const std::string& src, std::size_t budget) {
    TermPtr t = infer_elab(ctx, T(src)).second;
    s4::DualPtr d = s4::floorx(t);
    TermPtr back = s4::ceilx({}, ctx, d);
    auto r = s4::eq_bounded(s4::TheoryAll, back, t, budget, ctx);
    INFO(src, " -> ", print_dual(d), " -> ", print_term(back));
    CHECK(r.proven);
  };
  check_roundtrip("box [x:p] <- [n] in x", 50000);
  check_roundtrip("counit n", 50000);
  check_roundtrip("comult n", 50000);
  check_roundtrip("box [] <- [] in c:p", 50000);
  check_roundtrip("box [x:p] <- [n] in \\w:q. x", 100000);
}

TEST_CASE("dual parser round trips") {
  for (const char* s :
       {"let box a = m in boxup @a", "\\x:[]p. let box a = x in @a",
        "boxup (f:p -> q x)", "(\\y:[]q. y) (let box a = m in boxup @a)"}) {
    auto d = parse_dual(s);
    CHECK(s4::dual_alpha_eq(parse_dual(print_dual(d)), d));
  }
  CHECK(print_dual(parse_dual("let box a = m in boxup @a")) ==
        "let box a = m in boxup @a");
}

TEST_CASE("ceilx typing transport") {
  // a modal variable a:rho maps to an ordinary a:[]rho
  TypingContext delta;
  delta.push("a", parse_type("p"));
  auto img = s4::ceilx(delta, {}, parse_dual("boxup @a"));
  TypingContext gamma;
  gamma.push("a", parse_type("[]p"));
  CHECK(print_type(infer(gamma, img)) == "[]p");

  gen::GenConfig cfg;
  cfg.max_size = 8;
  for (int i = 0; i < 40; ++i) {
    cfg.seed = 131000 + i;
    auto [c, t] = gen::gen_term(cfg);
    // floorx then ceilx preserves the type
    auto elab = infer_elab(c, t);
    TermPtr back = s4::ceilx({}, c, s4::floorx(elab.second));
    CHECK(type_eq(infer(c, back), elab.first));
  }
}
