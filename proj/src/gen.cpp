#include "lbx/gen.hpp"

#include <algorithm>

namespace lbx::gen {

namespace {

struct Generator {
  Rng rng;
  const GenConfig& cfg;
  int name_counter = 0;

  Generator(std::uint64_t seed, const GenConfig& c) : rng(seed), cfg(c) {}

  std::string fresh_binder() { return "v" + std::to_string(++name_counter); }

  TypePtr gen_type(int depth) {
    if (depth <= 0 || rng.chance(45))
      return Type::make_atom(rng.chance(50) ? "p" : "q");
    if (rng.chance(50))
      return Type::make_arrow(gen_type(depth - 1), gen_type(depth - 1));
    return Type::make_box(gen_type(depth - 1));
  }

  // Builds a term of type `goal` under `env` within `budget` nodes; the
  // node count of the result never exceeds max(1, budget). Constants
  // inhabit every type, so generation always succeeds.
  TermPtr gen(const TypingContext& env, const TypePtr& goal, int budget,
              bool need_value) {
    if (budget > 1) {
      // Weighted strategy order; box and application get extra tries to
      // exercise the box rules.
      for (int attempt = 0; attempt < 4; ++attempt) {
        unsigned roll = static_cast<unsigned>(rng.below(100));
        if (goal->kind == Type::Kind::Box && roll < 45) {
          if (TermPtr t = gen_box(env, goal->boxed, budget, need_value)) return t;
        } else if (goal->kind == Type::Kind::Arrow && roll < 55) {
          TypingContext inner = env;
          std::string x = fresh_binder();
          inner.push(x, goal->dom);
          TermPtr body = gen(inner, goal->cod, budget - 1, false);
          return Term::make_lam(x, goal->dom, body);
        } else if (!need_value && budget >= 3 && roll < 80) {
          TypePtr arg_ty = gen_type(cfg.type_depth - 1);
          int arg_budget = 1 + static_cast<int>(rng.below((budget - 1) / 2));
          TermPtr fun =
              gen(env, Type::make_arrow(arg_ty, goal), budget - 1 - arg_budget, false);
          TermPtr arg = gen(env, arg_ty, arg_budget, false);
          return Term::make_app(fun, arg);
        } else if (!need_value && budget >= 3 && cfg.calculus == Calc::CompC &&
                   roll < 90) {
          TypePtr bound_ty = gen_type(cfg.type_depth - 1);
          int bound_budget = 1 + static_cast<int>(rng.below((budget - 1) / 2));
          TermPtr bound = gen(env, bound_ty, bound_budget, false);
          TypingContext inner = env;
          std::string x = fresh_binder();
          inner.push(x, bound_ty);
          TermPtr body = gen(inner, goal, budget - 1 - bound_budget, false);
          return Term::make_let(x, bound, body);
        } else {
          break;
        }
      }
    }
    // Leaves: a variable of the right type when available, else a constant.
    std::vector<std::string> candidates;
    for (const auto& [name, ty] : env.entries())
      if (type_eq(ty, goal)) candidates.push_back(name);
    if (!candidates.empty() && rng.chance(70))
      return Term::make_var(candidates[rng.below(candidates.size())]);
    return Term::make_const(rng.chance(50) ? "c" : "d", goal);
  }

  TermPtr gen_box(const TypingContext& env, const TypePtr& body_ty, int budget,
                  bool need_value) {
    int max_n = static_cast<int>(std::min(3, std::max(0, budget - 2)));
    int n = static_cast<int>(rng.below(max_n + 1));  // 0..3 binders
    std::vector<Binder> binders;
    std::vector<TermPtr> args;
    TypingContext body_env;
    int arg_budget = n ? std::max(1, (budget - 2) / (n + 1)) : 0;
    for (int i = 0; i < n; ++i) {
      TypePtr sigma = gen_type(cfg.type_depth - 1);
      std::string x = fresh_binder();
      binders.push_back({x, sigma});
      body_env.push(x, sigma);
      args.push_back(
          gen(env, Type::make_box(sigma), arg_budget, need_value));
    }
    bool body_value = cfg.restricted || need_value;
    TermPtr body = gen(body_env, body_ty, std::max(1, arg_budget), body_value);
    return Term::make_box(std::move(binders), std::move(args), body);
  }
};

}  // namespace

std::pair<TypingContext, TermPtr> gen_term(const GenConfig& cfg) {
  Generator g(cfg.seed, cfg);
  // A small ambient context of boxed and functional variables.
  TypingContext ctx;
  int nvars = 2 + static_cast<int>(g.rng.below(3));
  for (int i = 0; i < nvars; ++i)
    ctx.push("g" + std::to_string(i + 1), g.gen_type(cfg.type_depth));
  TypePtr goal = g.gen_type(cfg.type_depth);
  TermPtr t = g.gen(ctx, goal, cfg.max_size, false);
  // Generation is correct by construction; re-check to be sure.
  infer(ctx, t);
  if (cfg.restricted && !is_restricted(t))
    throw GenError("generator emitted an unrestricted term");
  return {ctx, t};
}

std::vector<std::pair<TypingContext, TermPtr>> gen_terms(const GenConfig& cfg,
                                                         int count) {
  std::vector<std::pair<TypingContext, TermPtr>> out;
  out.reserve(count);
  GenConfig c = cfg;
  for (int i = 0; i < count; ++i) {
    c.seed = cfg.seed + static_cast<std::uint64_t>(i);
    out.push_back(gen_term(c));
  }
  return out;
}

std::tuple<TypingContext, TermPtr, TermPtr> gen_pair(const GenConfig& cfg) {
  Generator g(cfg.seed, cfg);
  TypingContext ctx;
  int nvars = 2 + static_cast<int>(g.rng.below(3));
  for (int i = 0; i < nvars; ++i)
    ctx.push("g" + std::to_string(i + 1), g.gen_type(cfg.type_depth));
  TypePtr goal = g.gen_type(cfg.type_depth);
  TermPtr a = g.gen(ctx, goal, cfg.max_size, false);
  TermPtr b = g.gen(ctx, goal, cfg.max_size, false);
  infer(ctx, a);
  infer(ctx, b);
  return {ctx, a, b};
}

TermPtr random_rewrite(const TermPtr& t, Calc calc, int max_steps,
                       std::uint64_t seed, const TypingContext& ctx) {
  Rng rng(seed);
  TermPtr cur = t;
  for (int i = 0; i < max_steps; ++i) {
    auto steps = redexes(cur, calc, ctx);
    if (steps.empty()) break;
    cur = steps[rng.below(steps.size())].result;
  }
  return cur;
}

}  // namespace lbx::gen
