#include "lbx/s4.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include "lbx/parse.hpp"
#include "lbx/rules.hpp"

namespace lbx::s4 {

TermPtr make_counit(TypePtr instance) {
  TypePtr ann;
  if (instance) ann = Type::make_arrow(Type::make_box(instance), instance);
  return Term::make_const("counit", ann);
}

TermPtr make_comult(TypePtr instance) {
  TypePtr ann;
  if (instance)
    ann = Type::make_arrow(Type::make_box(instance),
                           Type::make_box(Type::make_box(instance)));
  return Term::make_const("comult", ann);
}

bool is_counit(const TermPtr& t) {
  return t->kind == Term::Kind::Const && t->name == "counit";
}

bool is_comult(const TermPtr& t) {
  return t->kind == Term::Kind::Const && t->name == "comult";
}

TypePtr instance_type(const TermPtr& t) {
  if (!t->ann) return nullptr;
  if (t->ann->kind != Type::Kind::Arrow || t->ann->dom->kind != Type::Kind::Box)
    return nullptr;
  return t->ann->dom->boxed;
}

unsigned theory_from_names(const std::vector<std::string>& names) {
  unsigned t = 0;
  for (const auto& n : names) {
    if (n == "s4" || n == "base") t |= TheoryS4;
    else if (n == "st") t |= TheoryST;
    else if (n == "sym") t |= TheorySym;
    else if (n == "rules" || n == "cbn") t |= TheoryRulesN;
    else if (n == "all") t |= TheoryAll;
    else throw std::runtime_error("unknown theory fragment '" + n + "'");
  }
  return t;
}

TermPtr boxsub(std::vector<Binder> binders, std::vector<TermPtr> args, TermPtr body) {
  std::vector<TermPtr> dargs;
  dargs.reserve(args.size());
  for (std::size_t i = 0; i < args.size(); ++i)
    dargs.push_back(Term::make_app(make_comult(binders[i].type), args[i]));
  for (auto& b : binders) b.type = Type::make_box(b.type);
  return Term::make_box(std::move(binders), std::move(dargs), std::move(body));
}

TermPtr unbox(TermPtr m) { return Term::make_app(make_counit(nullptr), std::move(m)); }

// ---------------------------------------------------------------------
// Equality search over the lambda-box S4 theory.

namespace {

struct Rewrite {
  TermPtr result;
  const char* label;
};

TypePtr try_infer(const TypingContext& env, const TermPtr& t) {
  try {
    return infer(env, t);
  } catch (const TypeError&) {
    return nullptr;
  }
}

bool is_counit_app(const TermPtr& t) {
  return t->kind == Term::Kind::App && is_counit(t->fun);
}
bool is_comult_app(const TermPtr& t) {
  return t->kind == Term::Kind::App && is_comult(t->fun);
}

// Local S4 rewrites at node u. `env` is the typing environment at this
// position; it feeds the instance annotations of constants created by the
// expansion directions.
void local_s4(unsigned theory, const TermPtr& u, const TypingContext& env,
              std::vector<Rewrite>& out) {
  if (theory & TheoryS4) {
    // nat-eps: eps (box [xs] <- [Ns] in M)  ->  M[eps Ns / xs]
    if (is_counit_app(u) && u->arg->kind == Term::Kind::BoxIn) {
      const TermPtr& bx = u->arg;
      std::vector<std::pair<std::string, TermPtr>> sub;
      for (std::size_t i = 0; i < bx->binders.size(); ++i)
        sub.push_back({bx->binders[i].name,
                       Term::make_app(make_counit(bx->binders[i].type), bx->args[i])});
      out.push_back({substitute_parallel(bx->body, sub), "nat-eps"});
    }
    // nat-delta: delta (box [xs] <- [Ns] in M)
    //   -> box [ys] <- [delta Ns] in box [xs] <- [ys] in M
    if (is_comult_app(u) && u->arg->kind == Term::Kind::BoxIn) {
      const TermPtr& bx = u->arg;
      std::set<std::string> avoid;
      for (const auto& b : bx->binders) avoid.insert(b.name);
      std::vector<Binder> outer;
      std::vector<TermPtr> outer_args, inner_args;
      for (std::size_t i = 0; i < bx->binders.size(); ++i) {
        std::string y = fresh_name("y", avoid);
        avoid.insert(y);
        outer.push_back({y, Type::make_box(bx->binders[i].type)});
        outer_args.push_back(
            Term::make_app(make_comult(bx->binders[i].type), bx->args[i]));
        inner_args.push_back(Term::make_var(y));
      }
      TermPtr inner = Term::make_box(bx->binders, std::move(inner_args), bx->body);
      out.push_back({Term::make_box(std::move(outer), std::move(outer_args), inner),
                     "nat-delta"});
    }
    // nat-delta, reverse direction
    if (u->kind == Term::Kind::BoxIn && u->body->kind == Term::Kind::BoxIn &&
        u->binders.size() == u->body->binders.size() && !u->binders.empty()) {
      const TermPtr& inner = u->body;
      bool shape = true;
      for (std::size_t i = 0; i < u->binders.size() && shape; ++i) {
        shape = is_comult_app(u->args[i]) &&
                inner->args[i]->kind == Term::Kind::Var &&
                inner->args[i]->name == u->binders[i].name &&
                type_eq(u->binders[i].type, Type::make_box(inner->binders[i].type));
      }
      if (shape) {
        TypingContext body_env;
        for (const auto& b : inner->binders) body_env.push(b.name, b.type);
        if (TypePtr bty = try_infer(body_env, inner->body)) {
          std::vector<TermPtr> args;
          for (const auto& a : u->args) args.push_back(a->arg);
          out.push_back({Term::make_app(make_comult(bty),
                                        Term::make_box(inner->binders, std::move(args),
                                                       inner->body)),
                         "nat-delta(rev)"});
        }
      }
    }
    // mon: delta (delta M) -> box [x] <- [delta M] in delta x
    if (is_comult_app(u) && is_comult_app(u->arg)) {
      TypePtr rho = instance_type(u->arg->fun);
      if (!rho) {
        TypePtr mty = try_infer(env, u->arg->arg);
        if (mty && mty->kind == Type::Kind::Box) rho = mty->boxed;
      }
      if (rho) {
        std::string x = fresh_name("x", free_vars(u));
        out.push_back(
            {Term::make_box({{x, Type::make_box(rho)}},
                            {Term::make_app(make_comult(rho), u->arg->arg)},
                            Term::make_app(make_comult(rho), Term::make_var(x))),
             "mon-dd"});
      }
    }
    // mon: eps (delta M) -> box [x] <- [delta M] in eps x
    if (is_counit_app(u) && is_comult_app(u->arg)) {
      TypePtr rho = instance_type(u->arg->fun);
      if (!rho) {
        TypePtr mty = try_infer(env, u->arg->arg);
        if (mty && mty->kind == Type::Kind::Box) rho = mty->boxed;
      }
      if (rho) {
        std::string x = fresh_name("x", free_vars(u));
        out.push_back(
            {Term::make_box({{x, Type::make_box(rho)}},
                            {Term::make_app(make_comult(rho), u->arg->arg)},
                            Term::make_app(make_counit(rho), Term::make_var(x))),
             "mon-ed"});
      }
    }
    // Shared shape of the two box-form mon equalities:
    //   box [x] <- [delta M] in delta x  <-  delta (delta M)   (reverse)
    //   box [x] <- [delta M] in eps x    ->  M                 (mon-ed 2)
    //   box [x] <- [delta M] in eps x    <-  eps (delta M)     handled above
    if (u->kind == Term::Kind::BoxIn && u->binders.size() == 1 &&
        is_comult_app(u->args[0]) && u->args[0]->arg) {
      const TermPtr& m = u->args[0]->arg;
      const TermPtr& body = u->body;
      bool body_on_binder = body->kind == Term::Kind::App &&
                            body->arg->kind == Term::Kind::Var &&
                            body->arg->name == u->binders[0].name;
      if (body_on_binder && is_comult(body->fun) &&
          u->binders[0].type->kind == Type::Kind::Box) {
        TypePtr rho = u->binders[0].type->boxed;
        out.push_back({Term::make_app(make_comult(Type::make_box(rho)),
                                      Term::make_app(make_comult(rho), m)),
                       "mon-dd(rev)"});
      }
      if (body_on_binder && is_counit(body->fun)) {
        out.push_back({m, "mon-ed"});
        if (u->binders[0].type->kind == Type::Kind::Box) {
          TypePtr rho = u->binders[0].type->boxed;
          out.push_back({Term::make_app(make_counit(Type::make_box(rho)),
                                        Term::make_app(make_comult(rho), m)),
                         "mon-ed(rev)"});
        }
      }
    }
    // Reverse of mon-ed 2: wrap any box-typed subterm,
    //   M -> box [x] <- [delta M] in eps x.
    if (TypePtr ty = try_infer(env, u); ty && ty->kind == Type::Kind::Box) {
      TypePtr rho = ty->boxed;
      std::string x = fresh_name("x", free_vars(u));
      out.push_back({Term::make_box({{x, ty}},
                                    {Term::make_app(make_comult(rho), u)},
                                    Term::make_app(make_counit(rho), Term::make_var(x))),
                     "mon-ed(rev)"});
    }
  }

  if ((theory & TheoryST) && u->kind == Term::Kind::BoxIn) {
    auto body_fv = free_vars(u->body);
    // weakening: drop an unused column
    for (std::size_t i = 0; i < u->binders.size(); ++i) {
      if (body_fv.count(u->binders[i].name)) continue;
      auto binders = u->binders;
      auto args = u->args;
      binders.erase(binders.begin() + i);
      args.erase(args.begin() + i);
      out.push_back({Term::make_box(std::move(binders), std::move(args), u->body),
                     "st-weak"});
    }
    // contraction: merge adjacent equal arguments
    for (std::size_t i = 0; i + 1 < u->binders.size(); ++i) {
      if (!alpha_eq(u->args[i], u->args[i + 1])) continue;
      if (!type_eq(u->binders[i].type, u->binders[i + 1].type)) continue;
      auto binders = u->binders;
      auto args = u->args;
      std::string kept = binders[i].name, gone = binders[i + 1].name;
      binders.erase(binders.begin() + i + 1);
      args.erase(args.begin() + i + 1);
      out.push_back({Term::make_box(std::move(binders), std::move(args),
                                    substitute(u->body, gone, Term::make_var(kept))),
                     "st-contr"});
    }
    // reverse contraction: duplicate a column with a fresh unused binder
    for (std::size_t i = 0; i < u->binders.size(); ++i) {
      auto binders = u->binders;
      auto args = u->args;
      std::set<std::string> avoid = body_fv;
      for (const auto& b : binders) avoid.insert(b.name);
      std::string fresh = fresh_name(binders[i].name, avoid);
      binders.insert(binders.begin() + i + 1, {fresh, binders[i].type});
      args.insert(args.begin() + i + 1, args[i]);
      out.push_back({Term::make_box(std::move(binders), std::move(args), u->body),
                     "st-contr(rev)"});
    }
  }

  if ((theory & TheorySym) && u->kind == Term::Kind::BoxIn) {
    for (std::size_t i = 0; i + 1 < u->binders.size(); ++i) {
      auto binders = u->binders;
      auto args = u->args;
      std::swap(binders[i], binders[i + 1]);
      std::swap(args[i], args[i + 1]);
      out.push_back({Term::make_box(std::move(binders), std::move(args), u->body),
                     "sym"});
    }
  }
}

struct S4Expander {
  unsigned theory;
  const TypingContext& base;

  std::vector<std::pair<TermPtr, const char*>> expand(const TermPtr& t) const {
    std::vector<std::pair<TermPtr, const char*>> out;
    if (theory & TheoryRulesN) {
      for (const auto& s : redexes(t, Calc::Cbn, base))
        out.push_back({s.result, "cbn"});
    }
    std::vector<int> pos;
    TypingContext env = base;
    walk(t, t, pos, env, out);
    return out;
  }

  void walk(const TermPtr& whole, const TermPtr& u, std::vector<int>& pos,
            TypingContext env,
            std::vector<std::pair<TermPtr, const char*>>& out) const {
    std::vector<Rewrite> local;
    local_s4(theory, u, env, local);
    for (auto& r : local)
      out.push_back({replace_at(whole, pos, r.result), r.label});
    switch (u->kind) {
      case Term::Kind::Const:
      case Term::Kind::Var: return;
      case Term::Kind::Lam: {
        env.push(u->name, u->ann);
        pos.push_back(0);
        walk(whole, u->body, pos, env, out);
        pos.pop_back();
        return;
      }
      case Term::Kind::App: {
        pos.push_back(0);
        walk(whole, u->fun, pos, env, out);
        pos.back() = 1;
        walk(whole, u->arg, pos, env, out);
        pos.pop_back();
        return;
      }
      case Term::Kind::Let: {
        pos.push_back(0);
        walk(whole, u->bound, pos, env, out);
        pos.pop_back();
        env.push(u->name, try_infer(env, u->bound));
        pos.push_back(1);
        walk(whole, u->body, pos, env, out);
        pos.pop_back();
        return;
      }
      case Term::Kind::BoxIn: {
        for (std::size_t i = 0; i < u->args.size(); ++i) {
          pos.push_back(static_cast<int>(i));
          walk(whole, u->args[i], pos, env, out);
          pos.pop_back();
        }
        TypingContext body_env;
        for (const auto& b : u->binders) body_env.push(b.name, b.type);
        pos.push_back(static_cast<int>(u->args.size()));
        walk(whole, u->body, pos, body_env, out);
        pos.pop_back();
        return;
      }
    }
  }
};

struct SearchNode {
  TermPtr term;
  std::string parent_key;  // empty for roots
  const char* label = nullptr;
  int depth = 0;
};

// Bidirectional layered BFS; meets yield a shortest combined path.
template <typename Expand>
EqResult bidirectional_search(const TermPtr& a, const TermPtr& b,
                              std::size_t budget, const Expand& expand,
                              std::function<std::string(const TermPtr&)> show) {
  EqResult res;
  std::unordered_map<std::string, SearchNode> seen_a, seen_b;
  std::deque<std::string> frontier_a, frontier_b;
  std::string ka = canon_key(a), kb = canon_key(b);
  seen_a[ka] = {a, "", nullptr, 0};
  seen_b[kb] = {b, "", nullptr, 0};
  frontier_a.push_back(ka);
  frontier_b.push_back(kb);

  auto build_trace = [&](const std::string& meet) {
    std::vector<std::string> left;
    std::size_t steps = 0;
    for (std::string k = meet; !k.empty();) {
      const auto& n = seen_a.at(k);
      std::string line = show(n.term);
      if (n.label) {
        line = std::string("  =[") + n.label + "]= " + line;
        ++steps;
      }
      left.push_back(line);
      k = n.parent_key;
    }
    std::reverse(left.begin(), left.end());
    res.trace = std::move(left);
    // Continue from the meeting point back out to b; each stored label
    // annotates the step between a node and its parent on the b side.
    for (std::string k = meet;;) {
      const auto& n = seen_b.at(k);
      if (n.parent_key.empty()) break;
      res.trace.push_back(std::string("  =[") + n.label + "]= " +
                          show(seen_b.at(n.parent_key).term));
      ++steps;
      k = n.parent_key;
    }
    res.path_length = steps;
    res.proven = true;
  };

  if (ka == kb) {
    res.proven = true;
    res.trace = {show(a)};
    return res;
  }

  while ((!frontier_a.empty() || !frontier_b.empty()) &&
         res.rewrites_used < budget) {
    bool from_a = !frontier_a.empty() &&
                  (frontier_b.empty() || frontier_a.size() <= frontier_b.size());
    auto& frontier = from_a ? frontier_a : frontier_b;
    auto& mine = from_a ? seen_a : seen_b;
    auto& other = from_a ? seen_b : seen_a;

    std::string key = frontier.front();
    frontier.pop_front();
    SearchNode cur = mine.at(key);
    for (const auto& [next, label] : expand(cur.term)) {
      if (++res.rewrites_used > budget) return res;
      std::string nk = canon_key(next);
      if (mine.count(nk)) continue;
      mine[nk] = {next, key, label, cur.depth + 1};
      if (other.count(nk)) {
        build_trace(nk);
        return res;
      }
      frontier.push_back(nk);
    }
  }
  return res;
}

}  // namespace

EqResult eq_bounded(unsigned theory, const TermPtr& a, const TermPtr& b,
                    std::size_t budget, const TypingContext& ctx) {
  auto [ta, ea] = infer_elab(ctx, a);
  auto [tb, eb] = infer_elab(ctx, b);
  (void)ta;
  (void)tb;
  S4Expander exp{theory, ctx};
  return bidirectional_search(
      ea, eb, budget, [&](const TermPtr& t) { return exp.expand(t); },
      [](const TermPtr& t) { return print_term(t); });
}

// ---------------------------------------------------------------------
// Dual-context calculus.

DualPtr DualTerm::mvar(std::string name) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::MVar;
  t->name = std::move(name);
  return t;
}
DualPtr DualTerm::var(std::string name) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::Var;
  t->name = std::move(name);
  return t;
}
DualPtr DualTerm::constant(std::string name, TypePtr ann) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::Const;
  t->name = std::move(name);
  t->ann = std::move(ann);
  return t;
}
DualPtr DualTerm::lam(std::string binder, TypePtr ann, DualPtr body) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::Lam;
  t->name = std::move(binder);
  t->ann = std::move(ann);
  t->body = std::move(body);
  return t;
}
DualPtr DualTerm::app(DualPtr fun, DualPtr arg) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::App;
  t->fun = std::move(fun);
  t->arg = std::move(arg);
  return t;
}
DualPtr DualTerm::boxup(DualPtr body) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::BoxUp;
  t->body = std::move(body);
  return t;
}
DualPtr DualTerm::letbox(std::string binder, DualPtr bound, DualPtr body) {
  auto t = std::make_shared<DualTerm>();
  t->kind = Kind::LetBox;
  t->name = std::move(binder);
  t->bound = std::move(bound);
  t->body = std::move(body);
  return t;
}

namespace {

void dual_fvs(const DualPtr& t, bool modal, std::set<std::string>& out) {
  switch (t->kind) {
    case DualTerm::Kind::MVar:
      if (modal) out.insert(t->name);
      return;
    case DualTerm::Kind::Var:
      if (!modal) out.insert(t->name);
      return;
    case DualTerm::Kind::Const: return;
    case DualTerm::Kind::Lam: {
      std::set<std::string> inner;
      dual_fvs(t->body, modal, inner);
      if (!modal) inner.erase(t->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case DualTerm::Kind::App:
      dual_fvs(t->fun, modal, out);
      dual_fvs(t->arg, modal, out);
      return;
    case DualTerm::Kind::BoxUp: dual_fvs(t->body, modal, out); return;
    case DualTerm::Kind::LetBox: {
      dual_fvs(t->bound, modal, out);
      std::set<std::string> inner;
      dual_fvs(t->body, modal, inner);
      if (modal) inner.erase(t->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

bool dual_alpha_rec(const DualPtr& a, const DualPtr& b,
                    std::vector<std::pair<std::string, std::string>>& vars,
                    std::vector<std::pair<std::string, std::string>>& mvars) {
  if (a->kind != b->kind) return false;
  auto lookup = [](const std::vector<std::pair<std::string, std::string>>& env,
                   const std::string& na, const std::string& nb) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      bool la = it->first == na, lb = it->second == nb;
      if (la || lb) return la && lb;
    }
    return na == nb;
  };
  switch (a->kind) {
    case DualTerm::Kind::MVar: return lookup(mvars, a->name, b->name);
    case DualTerm::Kind::Var: return lookup(vars, a->name, b->name);
    case DualTerm::Kind::Const:
      return a->name == b->name && type_eq(a->ann, b->ann);
    case DualTerm::Kind::Lam: {
      if (!type_eq(a->ann, b->ann)) return false;
      vars.push_back({a->name, b->name});
      bool ok = dual_alpha_rec(a->body, b->body, vars, mvars);
      vars.pop_back();
      return ok;
    }
    case DualTerm::Kind::App:
      return dual_alpha_rec(a->fun, b->fun, vars, mvars) &&
             dual_alpha_rec(a->arg, b->arg, vars, mvars);
    case DualTerm::Kind::BoxUp: return dual_alpha_rec(a->body, b->body, vars, mvars);
    case DualTerm::Kind::LetBox: {
      if (!dual_alpha_rec(a->bound, b->bound, vars, mvars)) return false;
      mvars.push_back({a->name, b->name});
      bool ok = dual_alpha_rec(a->body, b->body, vars, mvars);
      mvars.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool dual_alpha_eq(const DualPtr& a, const DualPtr& b) {
  std::vector<std::pair<std::string, std::string>> vars, mvars;
  return dual_alpha_rec(a, b, vars, mvars);
}

std::set<std::string> dual_free_mvars(const DualPtr& t) {
  std::set<std::string> out;
  dual_fvs(t, true, out);
  return out;
}
std::set<std::string> dual_free_vars(const DualPtr& t) {
  std::set<std::string> out;
  dual_fvs(t, false, out);
  return out;
}

TypePtr dual_infer(const TypingContext& delta, const TypingContext& gamma,
                   const DualPtr& t) {
  switch (t->kind) {
    case DualTerm::Kind::MVar: {
      if (TypePtr ty = delta.lookup(t->name)) return ty;
      if (gamma.lookup(t->name))
        throw DualTypeError("'" + t->name +
                            "' is an ordinary variable used in modal position");
      throw DualTypeError("unbound modal variable '@" + t->name + "'");
    }
    case DualTerm::Kind::Var: {
      if (TypePtr ty = gamma.lookup(t->name)) return ty;
      if (delta.lookup(t->name))
        throw DualTypeError("modal variable '" + t->name +
                            "' used in ordinary position; write '@" + t->name + "'");
      throw DualTypeError("unbound variable '" + t->name + "'");
    }
    case DualTerm::Kind::Const:
      if (!t->ann) throw DualTypeError("constant '" + t->name + "' lacks a type");
      return t->ann;
    case DualTerm::Kind::Lam: {
      TypingContext inner = gamma;
      inner.push(t->name, t->ann);
      return Type::make_arrow(t->ann, dual_infer(delta, inner, t->body));
    }
    case DualTerm::Kind::App: {
      TypePtr fty = dual_infer(delta, gamma, t->fun);
      TypePtr aty = dual_infer(delta, gamma, t->arg);
      if (fty->kind != Type::Kind::Arrow)
        throw DualTypeError("application head has type " + print_type(fty));
      if (!type_eq(fty->dom, aty))
        throw DualTypeError("application argument: expected " + print_type(fty->dom) +
                            ", found " + print_type(aty));
      return fty->cod;
    }
    case DualTerm::Kind::BoxUp: {
      TypingContext empty;  // the right-hand context is discarded
      return Type::make_box(dual_infer(delta, empty, t->body));
    }
    case DualTerm::Kind::LetBox: {
      TypePtr bty = dual_infer(delta, gamma, t->bound);
      if (bty->kind != Type::Kind::Box)
        throw DualTypeError("let box needs a boxed bound term, found " +
                            print_type(bty));
      TypingContext inner = delta;
      inner.push(t->name, bty->boxed);
      return dual_infer(inner, gamma, t->body);
    }
  }
  throw DualTypeError("unreachable");
}

namespace {

// Substitutes a dual term for a modal variable (used by let-box beta).
DualPtr dual_subst_mvar(const DualPtr& t, const std::string& a, const DualPtr& s) {
  switch (t->kind) {
    case DualTerm::Kind::MVar: return t->name == a ? s : t;
    case DualTerm::Kind::Var:
    case DualTerm::Kind::Const: return t;
    case DualTerm::Kind::Lam: {
      auto b = dual_subst_mvar(t->body, a, s);
      return b == t->body ? t : DualTerm::lam(t->name, t->ann, b);
    }
    case DualTerm::Kind::App: {
      auto f = dual_subst_mvar(t->fun, a, s);
      auto g = dual_subst_mvar(t->arg, a, s);
      return f == t->fun && g == t->arg ? t : DualTerm::app(f, g);
    }
    case DualTerm::Kind::BoxUp: {
      auto b = dual_subst_mvar(t->body, a, s);
      return b == t->body ? t : DualTerm::boxup(b);
    }
    case DualTerm::Kind::LetBox: {
      auto bd = dual_subst_mvar(t->bound, a, s);
      if (t->name == a) return bd == t->bound ? t : DualTerm::letbox(t->name, bd, t->body);
      std::string binder = t->name;
      DualPtr body = t->body;
      auto clash = dual_free_mvars(s);
      if (clash.count(binder) && dual_free_mvars(body).count(a)) {
        auto avoid = clash;
        auto bfv = dual_free_mvars(body);
        avoid.insert(bfv.begin(), bfv.end());
        avoid.insert(a);
        binder = fresh_name(t->name, avoid);
        body = dual_subst_mvar(body, t->name, DualTerm::mvar(binder));
      }
      body = dual_subst_mvar(body, a, s);
      if (binder == t->name && bd == t->bound && body == t->body) return t;
      return DualTerm::letbox(binder, bd, body);
    }
  }
  return t;
}

// Replaces an ordinary variable by a modal variable (used by floorx).
DualPtr dual_var_to_mvar(const DualPtr& t, const std::string& x, const std::string& a) {
  switch (t->kind) {
    case DualTerm::Kind::Var: return t->name == x ? DualTerm::mvar(a) : t;
    case DualTerm::Kind::MVar:
    case DualTerm::Kind::Const: return t;
    case DualTerm::Kind::Lam: {
      if (t->name == x) return t;
      auto b = dual_var_to_mvar(t->body, x, a);
      return b == t->body ? t : DualTerm::lam(t->name, t->ann, b);
    }
    case DualTerm::Kind::App: {
      auto f = dual_var_to_mvar(t->fun, x, a);
      auto g = dual_var_to_mvar(t->arg, x, a);
      return f == t->fun && g == t->arg ? t : DualTerm::app(f, g);
    }
    case DualTerm::Kind::BoxUp: {
      auto b = dual_var_to_mvar(t->body, x, a);
      return b == t->body ? t : DualTerm::boxup(b);
    }
    case DualTerm::Kind::LetBox: {
      auto bd = dual_var_to_mvar(t->bound, x, a);
      auto body = dual_var_to_mvar(t->body, x, a);
      if (bd == t->bound && body == t->body) return t;
      return DualTerm::letbox(t->name, bd, body);
    }
  }
  return t;
}

std::string dual_canon(const DualPtr& t, std::vector<std::string>& vars,
                       std::vector<std::string>& mvars) {
  auto lookup = [](const std::vector<std::string>& env, const std::string& n) {
    for (std::size_t i = env.size(); i-- > 0;)
      if (env[i] == n) return "@" + std::to_string(env.size() - 1 - i);
    return "f[" + n + "]";
  };
  switch (t->kind) {
    case DualTerm::Kind::MVar: return "m" + lookup(mvars, t->name);
    case DualTerm::Kind::Var: return "v" + lookup(vars, t->name);
    case DualTerm::Kind::Const:
      return "c[" + t->name + (t->ann ? ":" + print_type(t->ann) : "") + "]";
    case DualTerm::Kind::Lam: {
      vars.push_back(t->name);
      std::string b = dual_canon(t->body, vars, mvars);
      vars.pop_back();
      return "L:" + (t->ann ? print_type(t->ann) : "") + "." + b;
    }
    case DualTerm::Kind::App:
      return "(" + dual_canon(t->fun, vars, mvars) + " " +
             dual_canon(t->arg, vars, mvars) + ")";
    case DualTerm::Kind::BoxUp: return "#{" + dual_canon(t->body, vars, mvars) + "}";
    case DualTerm::Kind::LetBox: {
      std::string bd = dual_canon(t->bound, vars, mvars);
      mvars.push_back(t->name);
      std::string b = dual_canon(t->body, vars, mvars);
      mvars.pop_back();
      return "lb(" + bd + ")" + b;
    }
  }
  return "?";
}

std::string dual_key(const DualPtr& t) {
  std::vector<std::string> vars, mvars;
  return dual_canon(t, vars, mvars);
}

// One-layer commuting contexts for the third dual equality. The hole
// never sits under a box.
void dual_local(const DualPtr& u, std::vector<std::pair<DualPtr, const char*>>& out) {
  // let box a = box N in M  ->  M[N/a]
  if (u->kind == DualTerm::Kind::LetBox && u->bound->kind == DualTerm::Kind::BoxUp)
    out.push_back({dual_subst_mvar(u->body, u->name, u->bound->body), "letbox-beta"});
  // let box a = M in box a  ->  M, plus the reverse wrap
  if (u->kind == DualTerm::Kind::LetBox && u->body->kind == DualTerm::Kind::BoxUp &&
      u->body->body->kind == DualTerm::Kind::MVar && u->body->body->name == u->name)
    out.push_back({u->bound, "letbox-eta"});
  {
    std::string a = fresh_name("a", dual_free_mvars(u));
    out.push_back({DualTerm::letbox(a, u, DualTerm::boxup(DualTerm::mvar(a))),
                   "letbox-eta(rev)"});
  }
  // commuting conversions, hoisting direction and sinking direction
  auto commute = [&](const DualPtr& inner, auto rebuild, const char* label,
                     const std::set<std::string>& ctx_mvars,
                     const std::set<std::string>& bound_ordinaries) {
    if (inner->kind != DualTerm::Kind::LetBox) return;
    if (ctx_mvars.count(inner->name)) return;  // a not free in C; alpha-safe
    for (const auto& x : bound_ordinaries)
      if (dual_free_vars(inner->bound).count(x)) return;
    out.push_back(
        {DualTerm::letbox(inner->name, inner->bound, rebuild(inner->body)), label});
  };
  if (u->kind == DualTerm::Kind::App) {
    commute(u->fun, [&](DualPtr m) { return DualTerm::app(m, u->arg); },
            "letbox-comm", dual_free_mvars(u->arg), {});
    commute(u->arg, [&](DualPtr m) { return DualTerm::app(u->fun, m); },
            "letbox-comm", dual_free_mvars(u->fun), {});
  }
  if (u->kind == DualTerm::Kind::Lam)
    commute(u->body, [&](DualPtr m) { return DualTerm::lam(u->name, u->ann, m); },
            "letbox-comm", {}, {u->name});
  if (u->kind == DualTerm::Kind::LetBox)
    commute(u->bound, [&](DualPtr m) { return DualTerm::letbox(u->name, m, u->body); },
            "letbox-comm", dual_free_mvars(u->body), {});
  // The sinking direction of the commuting conversion is reached by
  // running the search from the other endpoint.
}

void dual_walk(const DualPtr& whole, const DualPtr& u,
               const std::function<DualPtr(DualPtr)>& rebuild,
               std::vector<std::pair<DualPtr, const char*>>& out) {
  std::vector<std::pair<DualPtr, const char*>> local;
  dual_local(u, local);
  for (auto& [r, label] : local) out.push_back({rebuild(r), label});
  switch (u->kind) {
    case DualTerm::Kind::MVar:
    case DualTerm::Kind::Var:
    case DualTerm::Kind::Const: return;
    case DualTerm::Kind::Lam:
      dual_walk(whole, u->body,
                [&, u](DualPtr r) { return rebuild(DualTerm::lam(u->name, u->ann, r)); },
                out);
      return;
    case DualTerm::Kind::App:
      dual_walk(whole, u->fun,
                [&, u](DualPtr r) { return rebuild(DualTerm::app(r, u->arg)); }, out);
      dual_walk(whole, u->arg,
                [&, u](DualPtr r) { return rebuild(DualTerm::app(u->fun, r)); }, out);
      return;
    case DualTerm::Kind::BoxUp:
      dual_walk(whole, u->body,
                [&, u](DualPtr r) { return rebuild(DualTerm::boxup(r)); }, out);
      return;
    case DualTerm::Kind::LetBox:
      dual_walk(whole, u->bound,
                [&, u](DualPtr r) {
                  return rebuild(DualTerm::letbox(u->name, r, u->body));
                },
                out);
      dual_walk(whole, u->body,
                [&, u](DualPtr r) {
                  return rebuild(DualTerm::letbox(u->name, u->bound, r));
                },
                out);
      return;
  }
}

}  // namespace

EqResult dual_eq_bounded(const DualPtr& a, const DualPtr& b, std::size_t budget) {
  EqResult res;
  struct Node {
    DualPtr term;
    std::string parent;
    const char* label;
  };
  std::unordered_map<std::string, Node> seen_a, seen_b;
  std::deque<std::string> fa, fb;
  std::string ka = dual_key(a), kb = dual_key(b);
  if (ka == kb) {
    res.proven = true;
    return res;
  }
  seen_a[ka] = {a, "", nullptr};
  seen_b[kb] = {b, "", nullptr};
  fa.push_back(ka);
  fb.push_back(kb);
  auto finish = [&](const std::string& meet) {
    std::size_t steps = 0;
    for (std::string k = meet; !k.empty(); k = seen_a.at(k).parent)
      if (seen_a.at(k).label) ++steps;
    for (std::string k = meet; !k.empty(); k = seen_b.at(k).parent)
      if (seen_b.at(k).label) ++steps;
    res.path_length = steps;
    res.proven = true;
  };
  while ((!fa.empty() || !fb.empty()) && res.rewrites_used < budget) {
    bool from_a = !fa.empty() && (fb.empty() || fa.size() <= fb.size());
    auto& frontier = from_a ? fa : fb;
    auto& mine = from_a ? seen_a : seen_b;
    auto& other = from_a ? seen_b : seen_a;
    std::string key = frontier.front();
    frontier.pop_front();
    DualPtr cur = mine.at(key).term;
    std::vector<std::pair<DualPtr, const char*>> nexts;
    dual_walk(cur, cur, [](DualPtr r) { return r; }, nexts);
    for (auto& [next, label] : nexts) {
      if (++res.rewrites_used > budget) return res;
      std::string nk = dual_key(next);
      if (mine.count(nk)) continue;
      mine[nk] = {next, key, label};
      if (other.count(nk)) {
        finish(nk);
        return res;
      }
      frontier.push_back(nk);
    }
  }
  return res;
}

TermPtr ceilx(const TypingContext& delta, const TypingContext& gamma,
              const DualPtr& t) {
  switch (t->kind) {
    case DualTerm::Kind::MVar: {
      TypePtr rho = delta.lookup(t->name);
      if (!rho) throw DualTypeError("unbound modal variable '@" + t->name + "'");
      return Term::make_app(make_counit(rho), Term::make_var(t->name));
    }
    case DualTerm::Kind::Var: return Term::make_var(t->name);
    case DualTerm::Kind::Const: return Term::make_const(t->name, t->ann);
    case DualTerm::Kind::Lam: {
      TypingContext inner = gamma;
      inner.push(t->name, t->ann);
      return Term::make_lam(t->name, t->ann, ceilx(delta, inner, t->body));
    }
    case DualTerm::Kind::App:
      return Term::make_app(ceilx(delta, gamma, t->fun), ceilx(delta, gamma, t->arg));
    case DualTerm::Kind::BoxUp: {
      // box [bs] <- [comult bs] in ceilx(M), bs = FV(M) in first-occurrence
      // order; the binder reuses the variable's name and shadows it.
      std::vector<std::string> order;
      std::set<std::string> seen;
      std::function<void(const DualPtr&, std::set<std::string>)> occurs =
          [&](const DualPtr& u, std::set<std::string> bound) {
            switch (u->kind) {
              case DualTerm::Kind::MVar:
                if (!bound.count(u->name) && !seen.count(u->name)) {
                  seen.insert(u->name);
                  order.push_back(u->name);
                }
                return;
              case DualTerm::Kind::Var:
              case DualTerm::Kind::Const: return;
              case DualTerm::Kind::Lam:
              case DualTerm::Kind::BoxUp: occurs(u->body, bound); return;
              case DualTerm::Kind::App:
                occurs(u->fun, bound);
                occurs(u->arg, bound);
                return;
              case DualTerm::Kind::LetBox:
                occurs(u->bound, bound);
                bound.insert(u->name);
                occurs(u->body, bound);
                return;
            }
          };
      occurs(t->body, {});
      std::vector<Binder> binders;
      std::vector<TermPtr> args;
      TypingContext inner_delta;
      for (const auto& b : order) {
        TypePtr rho = delta.lookup(b);
        if (!rho) throw DualTypeError("unbound modal variable '@" + b + "'");
        binders.push_back({b, Type::make_box(rho)});
        args.push_back(Term::make_app(make_comult(rho), Term::make_var(b)));
        inner_delta.push(b, rho);
      }
      TypingContext empty;
      return Term::make_box(std::move(binders), std::move(args),
                            ceilx(inner_delta, empty, t->body));
    }
    case DualTerm::Kind::LetBox: {
      TypePtr bty = dual_infer(delta, gamma, t->bound);
      if (bty->kind != Type::Kind::Box)
        throw DualTypeError("let box bound term is not boxed");
      TypingContext inner = delta;
      inner.push(t->name, bty->boxed);
      return Term::make_app(
          Term::make_lam(t->name, bty, ceilx(inner, gamma, t->body)),
          ceilx(delta, gamma, t->bound));
    }
  }
  throw DualTypeError("unreachable");
}

DualPtr floorx(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return DualTerm::var(t->name);
    case Term::Kind::Const: {
      if (is_counit(t)) {
        TypePtr s = instance_type(t);
        if (!s) throw DualTypeError("floorx needs an elaborated counit instance");
        return DualTerm::lam(
            "y", Type::make_box(s),
            DualTerm::letbox("a", DualTerm::var("y"), DualTerm::mvar("a")));
      }
      if (is_comult(t)) {
        TypePtr s = instance_type(t);
        if (!s) throw DualTypeError("floorx needs an elaborated comult instance");
        return DualTerm::lam(
            "y", Type::make_box(s),
            DualTerm::letbox("a", DualTerm::var("y"),
                             DualTerm::boxup(DualTerm::boxup(DualTerm::mvar("a")))));
      }
      return DualTerm::constant(t->name, t->ann);
    }
    case Term::Kind::Lam:
      return DualTerm::lam(t->name, t->ann, floorx(t->body));
    case Term::Kind::App:
      return DualTerm::app(floorx(t->fun), floorx(t->arg));
    case Term::Kind::BoxIn: {
      // let box as = floorx(Ns) in boxup (floorx(M)[as/xs])
      DualPtr body = floorx(t->body);
      std::set<std::string> used = dual_free_mvars(body);
      for (const auto& b : t->binders) used.insert(b.name);
      std::vector<std::string> mnames;
      for (const auto& b : t->binders) {
        std::string a = fresh_name("a", used);
        used.insert(a);
        mnames.push_back(a);
        body = dual_var_to_mvar(body, b.name, a);
      }
      DualPtr out = DualTerm::boxup(body);
      for (std::size_t i = t->binders.size(); i-- > 0;)
        out = DualTerm::letbox(mnames[i], floorx(t->args[i]), out);
      return out;
    }
    case Term::Kind::Let:
      throw DualTypeError("floorx does not handle let terms");
  }
  throw DualTypeError("unreachable");
}

}  // namespace lbx::s4
