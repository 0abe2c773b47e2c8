#include <doctest.h>

#include <functional>

#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/rules.hpp"
#include "lbx/typing.hpp"

using namespace lbx;

static TermPtr T(const std::string& s) { return parse_term(s); }

TEST_CASE("K axiom witness") {
  auto t = T("\\f:[](p -> q). \\x:[]p. box [f':p -> q, x':p] <- [f, x] in f' x'");
  CHECK(print_type(infer_closed(t)) == "[](p -> q) -> []p -> []q");
}

TEST_CASE("box rule simulation") {
  CHECK(print_type(infer_closed(T("box [] <- [] in c:p"))) == "[]p");
}

TEST_CASE("typing errors") {
  CHECK_THROWS_AS(infer_closed(T("box [x:p] <- [y] in x")), TypeError);

  try {
    infer_closed(T("\\y:q. box [x:p] <- [c:[]p] in y"));
    CHECK(false);
  } catch (const TypeError& e) {
    CHECK(e.error_kind == TypeError::Kind::BodyUsesOuterVariable);
  }

  try {
    infer_closed(T("(\\x:p. x) (c:q)"));
    CHECK(false);
  } catch (const TypeError& e) {
    CHECK(e.error_kind == TypeError::Kind::TypeMismatch);
  }

  try {
    infer_closed(T("x"));
    CHECK(false);
  } catch (const TypeError& e) {
    CHECK(e.error_kind == TypeError::Kind::UnboundVariable);
  }
}

TEST_CASE("shadowing picks the rightmost binding") {
  TypingContext ctx;
  ctx.push("x", parse_type("p"));
  ctx.push("x", parse_type("q"));
  CHECK(print_type(infer(ctx, T("x"))) == "q");
  CHECK(print_type(infer_closed(T("\\x:p. \\x:q. x"))) == "p -> q -> q");
}

TEST_CASE("let typing") {
  CHECK(print_type(infer_closed(T("let x = c:p in \\y:q. x"))) == "q -> p");
}

TEST_CASE("subject reduction spot checks") {
  TypingContext ctx;
  // identity redex
  auto t1 = T("(\\x:p. x) (c:p)");
  for (const auto& s : redexes(t1, Calc::Cbn))
    CHECK(check_subject_reduction({}, t1, s.result));
  // box merge
  auto t2 = T("box [x:p] <- [box [] <- [] in c:p] in x");
  auto steps = redexes(t2, Calc::Cbn);
  CHECK(!steps.empty());
  for (const auto& s : steps) {
    CHECK(check_subject_reduction({}, t2, s.result));
    CHECK(print_type(infer_closed(s.result)) == "[]p");
  }
  // K axiom applied, under instantiation q := p
  auto t3 = T(
      "(\\f:[](p -> p). \\x:[]p. box [f':p -> p, x':p] <- [f, x] in f' x') "
      "(box [] <- [] in \\z:p. z)");
  for (const auto& s : redexes(t3, Calc::Cbv))
    CHECK(check_subject_reduction({}, t3, s.result));
}

TEST_CASE("subformula property") {
  CHECK(subformula_check(
      {}, T("\\f:[](p -> q). \\x:[]p. box [f':p -> q, x':p] <- [f, x] in f' x'")));
  CHECK(subformula_check({}, T("\\x:p. x")));
  CHECK_THROWS_AS(subformula_check({}, T("(\\x:p. x) (c:p)")), TypeError);

  gen::GenConfig cfg;
  cfg.max_size = 14;
  for (int i = 0; i < 120; ++i) {
    cfg.seed = 9000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    auto nf = normalize(t, Calc::Cbn, kDefaultFuel, ctx).term;
    CHECK(subformula_check(ctx, nf));
  }
}

TEST_CASE("typable boxes close their bodies") {
  gen::GenConfig cfg;
  cfg.max_size = 14;
  for (int i = 0; i < 100; ++i) {
    cfg.seed = 4000 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    // collect box subterms and check FV(body) within binders
    std::function<void(const TermPtr&)> visit = [&](const TermPtr& u) {
      if (u->kind == Term::Kind::BoxIn) {
        for (const auto& v : free_vars(u->body)) {
          bool among = false;
          for (const auto& b : u->binders) among |= b.name == v;
          CHECK(among);
        }
      }
      for (int c = 0; c < child_count(u); ++c) visit(child_at(u, c));
    };
    visit(t);
  }
}
