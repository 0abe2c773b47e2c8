#include "lbx/term.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <stdexcept>

namespace lbx {

TypePtr Type::make_atom(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Atom;
  t->atom = std::move(name);
  return t;
}

TypePtr Type::make_arrow(TypePtr dom, TypePtr cod) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Arrow;
  t->dom = std::move(dom);
  t->cod = std::move(cod);
  return t;
}

TypePtr Type::make_box(TypePtr body) {
  auto t = std::make_shared<Type>();
  t->kind = Kind::Box;
  t->boxed = std::move(body);
  return t;
}

bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Type::Kind::Atom: return a->atom == b->atom;
    case Type::Kind::Arrow: return type_eq(a->dom, b->dom) && type_eq(a->cod, b->cod);
    case Type::Kind::Box: return type_eq(a->boxed, b->boxed);
  }
  return false;
}

bool is_subformula(const TypePtr& sub, const TypePtr& sup) {
  if (type_eq(sub, sup)) return true;
  switch (sup->kind) {
    case Type::Kind::Atom: return false;
    case Type::Kind::Arrow:
      return is_subformula(sub, sup->dom) || is_subformula(sub, sup->cod);
    case Type::Kind::Box: return is_subformula(sub, sup->boxed);
  }
  return false;
}

TermPtr Term::make_const(std::string name, TypePtr ann) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Const;
  t->name = std::move(name);
  t->ann = std::move(ann);
  return t;
}

TermPtr Term::make_var(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->name = std::move(name);
  return t;
}

TermPtr Term::make_lam(std::string binder, TypePtr ann, TermPtr body, bool admin) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Lam;
  t->name = std::move(binder);
  t->ann = std::move(ann);
  t->body = std::move(body);
  t->admin = admin;
  return t;
}

TermPtr Term::make_app(TermPtr fun, TermPtr arg) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::App;
  t->fun = std::move(fun);
  t->arg = std::move(arg);
  return t;
}

TermPtr Term::make_box(std::vector<Binder> binders, std::vector<TermPtr> args,
                       TermPtr body) {
  assert(binders.size() == args.size());
  auto t = std::make_shared<Term>();
  t->kind = Kind::BoxIn;
  t->binders = std::move(binders);
  t->args = std::move(args);
  t->body = std::move(body);
  return t;
}

TermPtr Term::make_let(std::string binder, TermPtr bound, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Kind::Let;
  t->name = std::move(binder);
  t->bound = std::move(bound);
  t->body = std::move(body);
  return t;
}

bool is_cont_name(const std::string& name) {
  return !name.empty() && name[0] == '%';
}

static void free_vars_into(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Const: return;
    case Term::Kind::Var: out.insert(t->name); return;
    case Term::Kind::Lam: {
      std::set<std::string> inner;
      free_vars_into(t->body, inner);
      inner.erase(t->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    case Term::Kind::App:
      free_vars_into(t->fun, out);
      free_vars_into(t->arg, out);
      return;
    case Term::Kind::BoxIn:
      // Free variables of a box are the free variables of its arguments.
      for (const auto& a : t->args) free_vars_into(a, out);
      return;
    case Term::Kind::Let: {
      free_vars_into(t->bound, out);
      std::set<std::string> inner;
      free_vars_into(t->body, inner);
      inner.erase(t->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  free_vars_into(t, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  std::string stem = base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back())))
    stem.pop_back();
  if (stem.empty()) stem = "x";
  for (int i = 1;; ++i) {
    std::string cand = stem + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

std::string fresh_cont_name(const std::set<std::string>& avoid) {
  return fresh_name("%k", avoid);
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
  return substitute_parallel(t, {{x, s}});
}

namespace {

using Subst = std::vector<std::pair<std::string, TermPtr>>;

std::set<std::string> subst_range_fvs(const Subst& sub) {
  std::set<std::string> out;
  for (const auto& [_, s] : sub) {
    auto fv = free_vars(s);
    out.insert(fv.begin(), fv.end());
  }
  return out;
}

TermPtr apply_subst(const TermPtr& t, const Subst& sub) {
  if (sub.empty()) return t;
  switch (t->kind) {
    case Term::Kind::Const: return t;
    case Term::Kind::Var: {
      for (const auto& [x, s] : sub)
        if (t->name == x) return s;
      return t;
    }
    case Term::Kind::Lam:
    case Term::Kind::Let: {
      bool is_lam = t->kind == Term::Kind::Lam;
      TermPtr bound = is_lam ? nullptr : apply_subst(t->bound, sub);
      Subst inner;
      for (const auto& [x, s] : sub)
        if (x != t->name) inner.push_back({x, s});
      std::string binder = t->name;
      TermPtr body = t->body;
      if (!inner.empty()) {
        auto body_fv = free_vars(body);
        bool relevant = false;
        for (const auto& [x, _] : inner) relevant |= body_fv.count(x) > 0;
        if (relevant) {
          auto clash = subst_range_fvs(inner);
          if (clash.count(binder)) {
            auto avoid = clash;
            avoid.insert(body_fv.begin(), body_fv.end());
            for (const auto& [x, _] : inner) avoid.insert(x);
            binder = fresh_name(t->name, avoid);
            body = substitute(body, t->name, Term::make_var(binder));
          }
          body = apply_subst(body, inner);
        }
      }
      if (is_lam) {
        if (binder == t->name && body == t->body) return t;
        return Term::make_lam(binder, t->ann, body, t->admin);
      }
      if (binder == t->name && body == t->body && bound == t->bound) return t;
      return Term::make_let(binder, bound, body);
    }
    case Term::Kind::App: {
      auto f = apply_subst(t->fun, sub);
      auto a = apply_subst(t->arg, sub);
      if (f == t->fun && a == t->arg) return t;
      return Term::make_app(f, a);
    }
    case Term::Kind::BoxIn: {
      // Box binders do not scope over the arguments, and the body is
      // untouched: its variables are the binders' in any typable term.
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (const auto& a : t->args) {
        auto a2 = apply_subst(a, sub);
        changed |= a2 != a;
        args.push_back(a2);
      }
      if (!changed) return t;
      return Term::make_box(t->binders, std::move(args), t->body);
    }
  }
  return t;
}

}  // namespace

TermPtr substitute_parallel(const TermPtr& t, const Subst& sub) {
  return apply_subst(t, sub);
}

namespace {

bool alpha_eq_rec(const TermPtr& a, const TermPtr& b,
                  std::vector<std::pair<std::string, std::string>>& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Const:
      return a->name == b->name &&
             ((!a->ann && !b->ann) || (a->ann && b->ann && type_eq(a->ann, b->ann)));
    case Term::Kind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool la = it->first == a->name, lb = it->second == b->name;
        if (la || lb) return la && lb;
      }
      return a->name == b->name;
    }
    case Term::Kind::Lam: {
      if (!type_eq(a->ann, b->ann)) return false;
      env.push_back({a->name, b->name});
      bool ok = alpha_eq_rec(a->body, b->body, env);
      env.pop_back();
      return ok;
    }
    case Term::Kind::App:
      return alpha_eq_rec(a->fun, b->fun, env) && alpha_eq_rec(a->arg, b->arg, env);
    case Term::Kind::Let: {
      if (!alpha_eq_rec(a->bound, b->bound, env)) return false;
      env.push_back({a->name, b->name});
      bool ok = alpha_eq_rec(a->body, b->body, env);
      env.pop_back();
      return ok;
    }
    case Term::Kind::BoxIn: {
      if (a->binders.size() != b->binders.size()) return false;
      for (std::size_t i = 0; i < a->args.size(); ++i) {
        if (!type_eq(a->binders[i].type, b->binders[i].type)) return false;
        if (!alpha_eq_rec(a->args[i], b->args[i], env)) return false;
      }
      // Binders enter scope simultaneously, for the body only.
      std::vector<std::pair<std::string, std::string>> body_env;
      for (std::size_t i = 0; i < a->binders.size(); ++i)
        body_env.push_back({a->binders[i].name, b->binders[i].name});
      return alpha_eq_rec(a->body, b->body, body_env);
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_eq_rec(a, b, env);
}

namespace {

void canon_type(const TypePtr& ty, std::string& out) {
  switch (ty->kind) {
    case Type::Kind::Atom: out += ty->atom; return;
    case Type::Kind::Arrow:
      out += '(';
      canon_type(ty->dom, out);
      out += '>';
      canon_type(ty->cod, out);
      out += ')';
      return;
    case Type::Kind::Box:
      out += '#';
      canon_type(ty->boxed, out);
      return;
  }
}

void canon_rec(const TermPtr& t, std::vector<std::string>& env, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Const:
      out += "c[" + t->name + ":";
      if (t->ann) canon_type(t->ann, out);
      out += ']';
      return;
    case Term::Kind::Var: {
      for (std::size_t i = env.size(); i-- > 0;) {
        if (env[i] == t->name) {
          out += '@' + std::to_string(env.size() - 1 - i);
          return;
        }
      }
      out += "f[" + t->name + ']';
      return;
    }
    case Term::Kind::Lam:
      out += "L";
      if (t->ann) {
        out += ':';
        canon_type(t->ann, out);
      }
      out += '.';
      env.push_back(t->name);
      canon_rec(t->body, env, out);
      env.pop_back();
      return;
    case Term::Kind::App:
      out += '(';
      canon_rec(t->fun, env, out);
      out += ' ';
      canon_rec(t->arg, env, out);
      out += ')';
      return;
    case Term::Kind::Let:
      out += "lt(";
      canon_rec(t->bound, env, out);
      out += ')';
      env.push_back(t->name);
      canon_rec(t->body, env, out);
      env.pop_back();
      return;
    case Term::Kind::BoxIn: {
      out += "bx" + std::to_string(t->binders.size()) + '[';
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        canon_type(t->binders[i].type, out);
        out += '=';
        canon_rec(t->args[i], env, out);
        out += ',';
      }
      out += "]{";
      std::vector<std::string> body_env;
      for (const auto& b : t->binders) body_env.push_back(b.name);
      canon_rec(t->body, body_env, out);
      out += '}';
      return;
    }
  }
}

}  // namespace

std::string canon_key(const TermPtr& t) {
  std::string out;
  std::vector<std::string> env;
  canon_rec(t, env, out);
  return out;
}

int child_count(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: return 0;
    case Term::Kind::Lam: return 1;
    case Term::Kind::App:
    case Term::Kind::Let: return 2;
    case Term::Kind::BoxIn: return static_cast<int>(t->args.size()) + 1;
  }
  return 0;
}

TermPtr child_at(const TermPtr& t, int i) {
  switch (t->kind) {
    case Term::Kind::Lam: return t->body;
    case Term::Kind::App: return i == 0 ? t->fun : t->arg;
    case Term::Kind::Let: return i == 0 ? t->bound : t->body;
    case Term::Kind::BoxIn:
      return i < static_cast<int>(t->args.size()) ? t->args[i] : t->body;
    default: throw std::logic_error("child_at: leaf term");
  }
}

TermPtr with_child(const TermPtr& t, int i, TermPtr c) {
  switch (t->kind) {
    case Term::Kind::Lam: return Term::make_lam(t->name, t->ann, std::move(c), t->admin);
    case Term::Kind::App:
      return i == 0 ? Term::make_app(std::move(c), t->arg)
                    : Term::make_app(t->fun, std::move(c));
    case Term::Kind::Let:
      return i == 0 ? Term::make_let(t->name, std::move(c), t->body)
                    : Term::make_let(t->name, t->bound, std::move(c));
    case Term::Kind::BoxIn: {
      if (i < static_cast<int>(t->args.size())) {
        auto args = t->args;
        args[i] = std::move(c);
        return Term::make_box(t->binders, std::move(args), t->body);
      }
      return Term::make_box(t->binders, t->args, std::move(c));
    }
    default: throw std::logic_error("with_child: leaf term");
  }
}

TermPtr subterm_at(const TermPtr& t, const std::vector<int>& path) {
  TermPtr cur = t;
  for (int i : path) cur = child_at(cur, i);
  return cur;
}

TermPtr replace_at(const TermPtr& t, const std::vector<int>& path, TermPtr repl) {
  if (path.empty()) return repl;
  std::vector<int> rest(path.begin() + 1, path.end());
  return with_child(t, path[0], replace_at(child_at(t, path[0]), rest, std::move(repl)));
}

TermPtr strip_admin(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: return t;
    case Term::Kind::Lam: {
      auto b = strip_admin(t->body);
      if (b == t->body && !t->admin) return t;
      return Term::make_lam(t->name, t->ann, b, false);
    }
    case Term::Kind::App: {
      auto f = strip_admin(t->fun), a = strip_admin(t->arg);
      if (f == t->fun && a == t->arg) return t;
      return Term::make_app(f, a);
    }
    case Term::Kind::Let: {
      auto b = strip_admin(t->bound), d = strip_admin(t->body);
      if (b == t->bound && d == t->body) return t;
      return Term::make_let(t->name, b, d);
    }
    case Term::Kind::BoxIn: {
      std::vector<TermPtr> args;
      bool changed = false;
      for (const auto& a : t->args) {
        auto a2 = strip_admin(a);
        changed |= a2 != a;
        args.push_back(a2);
      }
      auto b = strip_admin(t->body);
      changed |= b != t->body;
      if (!changed) return t;
      return Term::make_box(t->binders, std::move(args), b);
    }
  }
  return t;
}

std::size_t term_size(const TermPtr& t) {
  std::size_t n = 1;
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: break;
    case Term::Kind::Lam: n += term_size(t->body); break;
    case Term::Kind::App: n += term_size(t->fun) + term_size(t->arg); break;
    case Term::Kind::Let: n += term_size(t->bound) + term_size(t->body); break;
    case Term::Kind::BoxIn:
      for (const auto& a : t->args) n += term_size(a);
      n += term_size(t->body);
      break;
  }
  return n;
}

}  // namespace lbx
