#include <doctest.h>

#include <functional>

#include "lbx/gen.hpp"
#include "lbx/parse.hpp"
#include "lbx/typing.hpp"

using namespace lbx;

TEST_CASE("generated terms typecheck and respect flags") {
  gen::GenConfig cfg;
  cfg.max_size = 20;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  auto terms = gen::gen_terms(cfg, 200);
  for (const auto& [ctx, t] : terms) {
    CHECK_NOTHROW(infer(ctx, t));
    CHECK(is_restricted(t));
    CHECK(term_size(t) <= 20);
  }
}

TEST_CASE("smallest inhabitant of an atom is a constant") {
  gen::GenConfig cfg;
  cfg.max_size = 1;
  for (int i = 0; i < 20; ++i) {
    cfg.seed = 1 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    CHECK((t->kind == Term::Kind::Const || t->kind == Term::Kind::Var));
    CHECK(term_size(t) == 1);
  }
}

TEST_CASE("determinism") {
  gen::GenConfig cfg;
  cfg.seed = 42;
  cfg.max_size = 18;
  cfg.calculus = Calc::CompC;
  cfg.restricted = true;
  auto a = gen::gen_terms(cfg, 50);
  auto b = gen::gen_terms(cfg, 50);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(print_term(a[i].second) == print_term(b[i].second));
  }
}

TEST_CASE("comp generator produces lets, cbn generator does not") {
  auto has_let = [](const TermPtr& t) {
    std::function<bool(const TermPtr&)> rec = [&](const TermPtr& u) {
      if (u->kind == Term::Kind::Let) return true;
      for (int i = 0; i < child_count(u); ++i)
        if (rec(child_at(u, i))) return true;
      return false;
    };
    return rec(t);
  };
  gen::GenConfig cfg;
  cfg.max_size = 22;
  cfg.calculus = Calc::CompC;
  cfg.restricted = true;
  bool any_let = false;
  for (const auto& [ctx, t] : gen::gen_terms(cfg, 100)) any_let |= has_let(t);
  CHECK(any_let);

  cfg.calculus = Calc::Cbn;
  cfg.restricted = false;
  for (const auto& [ctx, t] : gen::gen_terms(cfg, 100)) CHECK_FALSE(has_let(t));
}

TEST_CASE("random rewriting stays well typed") {
  gen::GenConfig cfg;
  cfg.max_size = 15;
  cfg.calculus = Calc::Cbv;
  cfg.restricted = true;
  for (int i = 0; i < 50; ++i) {
    cfg.seed = 900 + i;
    auto [ctx, t] = gen::gen_term(cfg);
    auto u = gen::random_rewrite(t, Calc::Cbv, 3, cfg.seed, ctx);
    CHECK(type_eq(infer(ctx, t), infer(ctx, u)));
  }
}
