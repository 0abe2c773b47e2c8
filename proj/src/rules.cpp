#include "lbx/rules.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_set>

#include "lbx/parse.hpp"

namespace lbx {

Calc calc_from_name(const std::string& name) {
  if (name == "cbn") return Calc::Cbn;
  if (name == "cbv") return Calc::Cbv;
  if (name == "comp") return Calc::CompC;
  if (name == "s4") return Calc::S4Eq;
  throw std::runtime_error("unknown calculus '" + name + "'");
}

std::string calc_name(Calc c) {
  switch (c) {
    case Calc::Cbn: return "cbn";
    case Calc::Cbv: return "cbv";
    case Calc::CompC: return "comp";
    case Calc::S4Eq: return "s4";
  }
  return "?";
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::BetaArrow: return "beta->";
    case Rule::EtaArrow: return "eta->";
    case Rule::IdBox: return "id[]";
    case Rule::BetaBox: return "beta[]";
    case Rule::IdArrow: return "id->";
    case Rule::BetaArrowV: return "betav->";
    case Rule::EtaArrowV: return "etav->";
    case Rule::Lift: return "lift";
    case Rule::Flat: return "flat";
    case Rule::BetaOmega: return "betaOmega";
    case Rule::BetaBoxV: return "betav[]";
    case Rule::IdLet: return "id-let";
    case Rule::BetaLetV: return "betav-let";
    case Rule::CompLet: return "comp";
    case Rule::LetIntro: return "let-intro";
  }
  return "?";
}

bool is_value(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var:
    case Term::Kind::Lam: return true;
    case Term::Kind::App:
    case Term::Kind::Let: return false;
    case Term::Kind::BoxIn:
      for (const auto& a : t->args)
        if (!is_value(a)) return false;
      return true;
  }
  return false;
}

bool is_restricted(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: return true;
    case Term::Kind::Lam: return is_restricted(t->body);
    case Term::Kind::App: return is_restricted(t->fun) && is_restricted(t->arg);
    case Term::Kind::Let: return is_restricted(t->bound) && is_restricted(t->body);
    case Term::Kind::BoxIn:
      if (!is_value(t->body)) return false;
      for (const auto& a : t->args)
        if (!is_restricted(a)) return false;
      return is_restricted(t->body);
  }
  return false;
}

namespace {

// Merges the box at argument position i of `t` into `t` (the shared core
// of beta[] and betav[]): binders and arguments of the inner box are
// spliced in place of column i, freshened against the surviving binders,
// and the inner body is substituted for the binder in the outer body.
TermPtr merge_box_arg(const TermPtr& t, std::size_t i) {
  const TermPtr inner = t->args[i];
  std::set<std::string> avoid;
  for (std::size_t j = 0; j < t->binders.size(); ++j)
    if (j != i) avoid.insert(t->binders[j].name);
  auto body_fv = free_vars(t->body);
  avoid.insert(body_fv.begin(), body_fv.end());

  std::vector<Binder> in_binders = inner->binders;
  TermPtr in_body = inner->body;
  for (auto& b : in_binders) {
    std::string nn = fresh_name(b.name, avoid);
    if (nn != b.name) {
      in_body = substitute(in_body, b.name, Term::make_var(nn));
      b.name = nn;
    }
    avoid.insert(nn);
  }

  std::vector<Binder> binders;
  std::vector<TermPtr> args;
  for (std::size_t j = 0; j < i; ++j) {
    binders.push_back(t->binders[j]);
    args.push_back(t->args[j]);
  }
  for (std::size_t j = 0; j < in_binders.size(); ++j) {
    binders.push_back(in_binders[j]);
    args.push_back(inner->args[j]);
  }
  for (std::size_t j = i + 1; j < t->binders.size(); ++j) {
    binders.push_back(t->binders[j]);
    args.push_back(t->args[j]);
  }
  TermPtr body = substitute(t->body, t->binders[i].name, in_body);
  return Term::make_box(std::move(binders), std::move(args), body);
}

// Simple evaluation context decompositions u = C[r]: pairs of (argument
// position description, redex subterm) where C is one of  -M | V- |
// box [..] <- [V..V, -, M..M] in M.  `fill` rebuilds C[x] for a
// replacement x.
struct SimpleCtx {
  TermPtr redex;
  bool value_head_arg;  // C has shape V- (excluded by flat)
  std::function<TermPtr(TermPtr)> fill;
};

std::vector<SimpleCtx> simple_ctxs(const TermPtr& u) {
  std::vector<SimpleCtx> out;
  if (u->kind == Term::Kind::App) {
    out.push_back({u->fun, false, [u](TermPtr r) { return Term::make_app(std::move(r), u->arg); }});
    if (is_value(u->fun))
      out.push_back({u->arg, true, [u](TermPtr r) { return Term::make_app(u->fun, std::move(r)); }});
  } else if (u->kind == Term::Kind::BoxIn) {
    for (std::size_t i = 0; i < u->args.size(); ++i) {
      out.push_back({u->args[i], false, [u, i](TermPtr r) {
                       auto args = u->args;
                       args[i] = std::move(r);
                       return Term::make_box(u->binders, std::move(args), u->body);
                     }});
      if (!is_value(u->args[i])) break;  // later holes need a value prefix
    }
  }
  return out;
}

bool is_beta_shape(const TermPtr& r) {
  return r->kind == Term::Kind::App && r->fun->kind == Term::Kind::Lam;
}

bool is_var_app(const TermPtr& r) {
  return r->kind == Term::Kind::App && r->fun->kind == Term::Kind::Var;
}

// Evaluation-context spine check for betaOmega: walks `body` looking for
// subterms of shape (y x) with the whole access path made of simple
// context steps. Returns candidate positions (paths within body).
void eval_ctx_positions(const TermPtr& u, std::vector<int>& path,
                        std::vector<std::vector<int>>& out) {
  out.push_back(path);  // E may be empty
  if (u->kind == Term::Kind::App) {
    path.push_back(0);
    eval_ctx_positions(u->fun, path, out);
    path.pop_back();
    if (is_value(u->fun)) {
      path.push_back(1);
      eval_ctx_positions(u->arg, path, out);
      path.pop_back();
    }
  } else if (u->kind == Term::Kind::BoxIn) {
    for (std::size_t i = 0; i < u->args.size(); ++i) {
      path.push_back(static_cast<int>(i));
      eval_ctx_positions(u->args[i], path, out);
      path.pop_back();
      if (!is_value(u->args[i])) break;
    }
  }
}

struct Enumerator {
  Calc calc;
  std::vector<Step> steps;
  bool first_only = false;

  bool stop() const { return first_only && !steps.empty(); }

  void add(const std::vector<int>& pos, Rule rule, const TermPtr& whole,
           TermPtr replacement) {
    steps.push_back({rule, pos, replace_at(whole, pos, std::move(replacement))});
  }

  bool has(Rule r) const {
    switch (calc) {
      case Calc::Cbn:
        return r == Rule::BetaArrow || r == Rule::EtaArrow || r == Rule::IdBox ||
               r == Rule::BetaBox;
      case Calc::Cbv:
        return r == Rule::IdArrow || r == Rule::BetaArrowV || r == Rule::EtaArrowV ||
               r == Rule::Lift || r == Rule::Flat || r == Rule::BetaOmega ||
               r == Rule::IdBox || r == Rule::BetaBoxV;
      case Calc::CompC:
        return r == Rule::IdLet || r == Rule::BetaLetV || r == Rule::BetaArrowV ||
               r == Rule::EtaArrowV || r == Rule::CompLet || r == Rule::LetIntro ||
               r == Rule::IdBox || r == Rule::BetaBoxV;
      case Calc::S4Eq: return false;
    }
    return false;
  }

  // Infers the type of `r` under `env`; null if not typable there.
  static TypePtr try_infer(const TypingContext& env, const TermPtr& r) {
    try {
      return infer(env, r);
    } catch (const TypeError&) {
      return nullptr;
    }
  }

  void local(const TermPtr& whole, const TermPtr& u, const std::vector<int>& pos,
             const TypingContext& env) {
    // beta->  (cbn: any argument)
    if (has(Rule::BetaArrow) && is_beta_shape(u))
      add(pos, Rule::BetaArrow, whole,
          substitute(u->fun->body, u->fun->name, u->arg));
    if (stop()) return;
    // id->  ((\x.x)M -> M, any argument)
    if (has(Rule::IdArrow) && is_beta_shape(u) &&
        u->fun->body->kind == Term::Kind::Var && u->fun->body->name == u->fun->name)
      add(pos, Rule::IdArrow, whole, u->arg);
    if (stop()) return;
    // betav->  (value argument)
    if (has(Rule::BetaArrowV) && is_beta_shape(u) && is_value(u->arg))
      add(pos, Rule::BetaArrowV, whole,
          substitute(u->fun->body, u->fun->name, u->arg));
    if (stop()) return;
    // eta-> / etav->
    if (u->kind == Term::Kind::Lam && u->body->kind == Term::Kind::App &&
        u->body->arg->kind == Term::Kind::Var && u->body->arg->name == u->name) {
      const TermPtr& m = u->body->fun;
      if (!free_vars(m).count(u->name)) {
        if (has(Rule::EtaArrow)) add(pos, Rule::EtaArrow, whole, m);
        if (has(Rule::EtaArrowV) && is_value(m)) add(pos, Rule::EtaArrowV, whole, m);
      }
    }
    if (stop()) return;
    // id[]  (single binder, body exactly that variable)
    if (has(Rule::IdBox) && u->kind == Term::Kind::BoxIn && u->binders.size() == 1 &&
        u->body->kind == Term::Kind::Var && u->body->name == u->binders[0].name)
      add(pos, Rule::IdBox, whole, u->args[0]);
    if (stop()) return;
    // beta[] / betav[]
    if (u->kind == Term::Kind::BoxIn) {
      bool values_so_far = true;
      for (std::size_t i = 0; i < u->args.size(); ++i) {
        const TermPtr& a = u->args[i];
        if (a->kind == Term::Kind::BoxIn) {
          if (has(Rule::BetaBox))
            add(pos, Rule::BetaBox, whole, merge_box_arg(u, i));
          if (has(Rule::BetaBoxV) && values_so_far && is_value(a->body))
            add(pos, Rule::BetaBoxV, whole, merge_box_arg(u, i));
          if (stop()) return;
        }
        values_so_far = values_so_far && is_value(a);
      }
    }
    if (stop()) return;
    // lift / flat  (cbv)
    if (has(Rule::Lift) || has(Rule::Flat)) {
      for (const auto& c : simple_ctxs(u)) {
        if (has(Rule::Lift) && is_beta_shape(c.redex)) {
          // C[(\x.M)N] -> (\x.C[M])N, renaming x away from C and N.
          const TermPtr& lam = c.redex->fun;
          std::set<std::string> avoid = free_vars(u);
          auto nfv = free_vars(c.redex->arg);
          avoid.insert(nfv.begin(), nfv.end());
          std::string x = fresh_name(lam->name, avoid);
          TermPtr body = lam->body;
          if (x != lam->name) body = substitute(body, lam->name, Term::make_var(x));
          add(pos, Rule::Lift, whole,
              Term::make_app(Term::make_lam(x, lam->ann, c.fill(body)), c.redex->arg));
        }
        if (has(Rule::Flat) && !c.value_head_arg && is_var_app(c.redex)) {
          // C[yM] -> (\x.C[x])(yM); the new binder needs the type of yM.
          if (TypePtr ty = try_infer(env, c.redex)) {
            std::string x = fresh_name("x", free_vars(u));
            add(pos, Rule::Flat, whole,
                Term::make_app(Term::make_lam(x, ty, c.fill(Term::make_var(x))),
                               c.redex));
          }
        }
        if (stop()) return;
      }
    }
    // betaOmega  ((\x.E[yx])M -> E[yM], x not free in E[y])
    if (has(Rule::BetaOmega) && u->kind == Term::Kind::App &&
        u->fun->kind == Term::Kind::Lam) {
      const TermPtr& lam = u->fun;
      std::vector<std::vector<int>> cands;
      std::vector<int> p;
      eval_ctx_positions(lam->body, p, cands);
      for (const auto& hole : cands) {
        TermPtr sub = subterm_at(lam->body, hole);
        if (sub->kind != Term::Kind::App) continue;
        if (sub->fun->kind != Term::Kind::Var || sub->arg->kind != Term::Kind::Var)
          continue;
        if (sub->arg->name != lam->name) continue;
        const std::string& y = sub->fun->name;
        if (y == lam->name) continue;
        TermPtr e_of_y = replace_at(lam->body, hole, Term::make_var(y));
        if (free_vars(e_of_y).count(lam->name)) continue;
        add(pos, Rule::BetaOmega, whole,
            replace_at(lam->body, hole, Term::make_app(Term::make_var(y), u->arg)));
        if (stop()) return;
      }
    }
    // let rules (comp)
    if (u->kind == Term::Kind::Let) {
      if (has(Rule::IdLet) && u->body->kind == Term::Kind::Var &&
          u->body->name == u->name)
        add(pos, Rule::IdLet, whole, u->bound);
      if (stop()) return;
      if (has(Rule::BetaLetV) && is_value(u->bound))
        add(pos, Rule::BetaLetV, whole, substitute(u->body, u->name, u->bound));
      if (stop()) return;
      if (has(Rule::CompLet) && u->bound->kind == Term::Kind::Let) {
        // let x=(let y=L in N) in M -> let y=L in let x=N in M,
        // freshening y against M.
        const TermPtr& in = u->bound;
        std::set<std::string> avoid = free_vars(u->body);
        auto bfv = free_vars(in->body);
        avoid.insert(bfv.begin(), bfv.end());
        avoid.insert(u->name);
        std::string y = fresh_name(in->name, avoid);
        TermPtr n = in->body;
        if (y != in->name) n = substitute(n, in->name, Term::make_var(y));
        add(pos, Rule::CompLet, whole,
            Term::make_let(y, in->bound, Term::make_let(u->name, n, u->body)));
      }
    }
    if (stop()) return;
    if (has(Rule::LetIntro)) {
      for (const auto& c : simple_ctxs(u)) {
        if (is_value(c.redex)) continue;
        std::string x = fresh_name("x", free_vars(u));
        add(pos, Rule::LetIntro, whole,
            Term::make_let(x, c.redex, c.fill(Term::make_var(x))));
        if (stop()) return;
      }
    }
  }

  void walk(const TermPtr& whole, const TermPtr& u, std::vector<int>& pos,
            TypingContext env) {
    local(whole, u, pos, env);
    if (stop()) return;
    switch (u->kind) {
      case Term::Kind::Const:
      case Term::Kind::Var: return;
      case Term::Kind::Lam: {
        env.push(u->name, u->ann);
        pos.push_back(0);
        walk(whole, u->body, pos, env);
        pos.pop_back();
        return;
      }
      case Term::Kind::App: {
        pos.push_back(0);
        walk(whole, u->fun, pos, env);
        if (stop()) { pos.pop_back(); return; }
        pos.back() = 1;
        walk(whole, u->arg, pos, env);
        pos.pop_back();
        return;
      }
      case Term::Kind::Let: {
        pos.push_back(0);
        walk(whole, u->bound, pos, env);
        pos.pop_back();
        if (stop()) return;
        TypePtr bty = try_infer(env, u->bound);
        env.push(u->name, bty);
        pos.push_back(1);
        walk(whole, u->body, pos, env);
        pos.pop_back();
        return;
      }
      case Term::Kind::BoxIn: {
        for (std::size_t i = 0; i < u->args.size(); ++i) {
          pos.push_back(static_cast<int>(i));
          walk(whole, u->args[i], pos, env);
          pos.pop_back();
          if (stop()) return;
        }
        TypingContext body_env;  // box bodies see their binders only
        for (const auto& b : u->binders) body_env.push(b.name, b.type);
        pos.push_back(static_cast<int>(u->args.size()));
        walk(whole, u->body, pos, body_env);
        pos.pop_back();
        return;
      }
    }
  }
};

}  // namespace

std::vector<Step> redexes(const TermPtr& t, Calc calc, const TypingContext& ctx) {
  Enumerator e{calc, {}};
  std::vector<int> pos;
  e.walk(t, t, pos, ctx);
  return e.steps;
}

namespace {

// Leftmost-outermost redex only; cheaper than full enumeration.
std::optional<Step> first_redex(const TermPtr& t, Calc calc,
                                const TypingContext& ctx) {
  Enumerator e{calc, {}, /*first_only=*/true};
  std::vector<int> pos;
  e.walk(t, t, pos, ctx);
  if (e.steps.empty()) return std::nullopt;
  return e.steps.front();
}

}  // namespace

NormResult normalize(const TermPtr& t, Calc calc, long fuel,
                     const TypingContext& ctx, bool want_trace) {
  NormResult res;
  res.term = t;
  while (true) {
    // Leftmost-outermost: the enumeration is outermost-first in
    // pre-order, so the first redex is the chosen one.
    auto step = first_redex(res.term, calc, ctx);
    if (!step) return res;
    if (res.steps >= fuel) {
      res.fuel_exhausted = true;
      return res;
    }
    if (want_trace) res.trace.push_back(*step);
    res.term = step->result;
    ++res.steps;
  }
}

bool calc_eq(const TermPtr& a, const TermPtr& b, Calc calc, long fuel,
             const TypingContext& ctx) {
  auto na = normalize(a, calc, fuel, ctx);
  if (na.fuel_exhausted) throw FuelExhausted();
  auto nb = normalize(b, calc, fuel, ctx);
  if (nb.fuel_exhausted) throw FuelExhausted();
  return alpha_eq(na.term, nb.term);
}

namespace {

CriticalPairCase make_case(const std::string& name, const TermPtr& t, Calc calc,
                           Rule r1, Rule r2, const TypingContext& ctx) {
  auto steps = redexes(t, calc, ctx);
  std::optional<Step> s1, s2;
  for (const auto& s : steps) {
    if (!s1 && s.rule == r1) {
      s1 = s;
      continue;
    }
    if (!s2 && s.rule == r2) s2 = s;
  }
  if (!s1 || !s2)
    throw std::logic_error("critical pair '" + name + "': expected redexes missing");
  bool joined = calc_eq(s1->result, s2->result, calc, kDefaultFuel, ctx);
  return {name, t, *s1, *s2, joined};
}

}  // namespace

std::vector<CriticalPairCase> critical_pair_suite() {
  std::vector<CriticalPairCase> out;
  TypingContext ctx;
  ctx.push("l", parse_type("[]p"));
  ctx.push("l2", parse_type("[]q"));
  ctx.push("n", parse_type("[]p"));

  // 1: box [x] <- [box [y..] <- [L..] in N] in x   (id[] at root vs beta[])
  out.push_back(make_case(
      "id-box vs beta-box at root",
      parse_term("box [x:q] <- [box [y:p] <- [l] in c:q] in x"), Calc::Cbn,
      Rule::IdBox, Rule::BetaBox, ctx));
  // 2: box [x] <- [box [y] <- [N] in y] in M   (id[] inside vs beta[])
  out.push_back(make_case(
      "inner id-box vs beta-box",
      parse_term("box [x:p] <- [box [y:p] <- [n] in y] in \\w:q. x"), Calc::Cbn,
      Rule::IdBox, Rule::BetaBox, ctx));
  // 3: nested boxes merged in either order
  out.push_back(make_case(
      "nested beta-box order",
      parse_term("box [x:p] <- [box [y:q -> p] <- [box [z:p] <- [l] in \\u:q. z] "
                 "in y (c:q)] in \\w:q. x"),
      Calc::Cbn, Rule::BetaBox, Rule::BetaBox, ctx));
  // 4: two boxed arguments, merge first vs second
  out.push_back(make_case(
      "sibling beta-box args",
      parse_term("box [x:p, x':q] <- [box [y:p] <- [l] in y, box [y':q] <- [l2] in "
                 "y'] in \\w:p. x'"),
      Calc::Cbn, Rule::BetaBox, Rule::BetaBox, ctx));
  return out;
}

std::vector<CriticalPairCase> comp_critical_pair_suite() {
  std::vector<CriticalPairCase> out;
  TypingContext ctx;
  ctx.push("f", parse_type("p -> p"));
  ctx.push("u", parse_type("p"));
  ctx.push("n", parse_type("[]p"));

  // box [x] <- [M] in x with M a non-value: let-intro vs id[]
  out.push_back(make_case("let-intro vs id-box",
                          parse_term("box [x:p] <- [f u] in x"), Calc::CompC,
                          Rule::LetIntro, Rule::IdBox, ctx));
  // box [x] <- [box [y..] <- [N..] in V] in M with a non-value argument:
  // let-intro vs betav[]
  out.push_back(make_case(
      "let-intro vs betav-box",
      parse_term("box [x:p] <- [box [y:p] <- [let z = f u in n] in y] in \\w:q. x"),
      Calc::CompC, Rule::LetIntro, Rule::BetaBoxV, ctx));
  return out;
}

int reachable(const TermPtr& a, const TermPtr& b, Calc calc,
              const std::vector<Rule>& allowed, int max_depth,
              std::size_t max_nodes, const TypingContext& ctx, bool at_least_one) {
  std::string target = canon_key(b);
  if (!at_least_one && canon_key(a) == target) return 1;
  std::unordered_set<std::string> seen;
  seen.insert(canon_key(a));
  std::deque<std::pair<TermPtr, int>> frontier{{a, 0}};
  bool truncated = false;
  while (!frontier.empty()) {
    auto [cur, depth] = frontier.front();
    frontier.pop_front();
    if (depth >= max_depth) {
      truncated = true;
      continue;
    }
    for (const auto& s : redexes(cur, calc, ctx)) {
      if (!allowed.empty() &&
          std::find(allowed.begin(), allowed.end(), s.rule) == allowed.end())
        continue;
      std::string key = canon_key(s.result);
      if (key == target) return 1;
      if (seen.count(key)) continue;
      if (seen.size() >= max_nodes) {
        truncated = true;
        continue;
      }
      seen.insert(key);
      frontier.push_back({s.result, depth + 1});
    }
  }
  return truncated ? -1 : 0;
}

}  // namespace lbx
