#include "lbx/cps.hpp"

#include <functional>

#include "lbx/parse.hpp"
#include "lbx/rules.hpp"

namespace lbx::cps {

namespace {

const std::string kHole = "_";

TypePtr answer() { return Type::make_atom(kAnswerAtom); }

void collect_names(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Const: return;
    case Term::Kind::Var: out.insert(t->name); return;
    case Term::Kind::Lam:
      out.insert(t->name);
      collect_names(t->body, out);
      return;
    case Term::Kind::App:
      collect_names(t->fun, out);
      collect_names(t->arg, out);
      return;
    case Term::Kind::Let:
      out.insert(t->name);
      collect_names(t->bound, out);
      collect_names(t->body, out);
      return;
    case Term::Kind::BoxIn:
      for (const auto& b : t->binders) out.insert(b.name);
      for (const auto& a : t->args) collect_names(a, out);
      collect_names(t->body, out);
      return;
  }
}

struct Transformer {
  std::set<std::string> avoid;

  explicit Transformer(const TermPtr& t) { collect_names(t, avoid); }

  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, avoid);
    avoid.insert(n);
    return n;
  }
  std::string fresh_cont() {
    std::string n = fresh_name("%k", avoid);
    avoid.insert(n);
    return n;
  }

  // ------------------------------------------------------------- Fig. 5
  TermPtr psi(const TypingContext& ctx, const TermPtr& v) {
    switch (v->kind) {
      case Term::Kind::Var: return v;
      case Term::Kind::Const: return Term::make_const(v->name, cps_type(v->ann));
      case Term::Kind::Lam: {
        TypingContext inner = ctx;
        inner.push(v->name, v->ann);
        TypePtr tau = infer(inner, v->body);
        std::string k = fresh_cont();
        // The lambda-facing continuation binder is part of the value, not
        // administrative.
        return Term::make_lam(
            k, Type::make_arrow(cps_type(tau), answer()),
            Term::make_lam(v->name, cps_type(v->ann),
                           Term::make_app(cps(inner, v->body), Term::make_var(k))));
      }
      case Term::Kind::BoxIn: {
        std::vector<Binder> binders;
        std::vector<TermPtr> args;
        for (std::size_t i = 0; i < v->args.size(); ++i) {
          if (!is_value(v->args[i]))
            throw CpsError("Psi applied to a box with a non-value argument");
          binders.push_back({v->binders[i].name, cps_type(v->binders[i].type)});
          args.push_back(psi(ctx, v->args[i]));
        }
        TypingContext body_ctx;
        for (const auto& b : v->binders) body_ctx.push(b.name, b.type);
        return Term::make_box(std::move(binders), std::move(args),
                              psi(body_ctx, v->body));
      }
      default: throw CpsError("Psi applied to a non-value");
    }
  }

  TermPtr cps(const TypingContext& ctx, const TermPtr& t) {
    TypePtr tau = infer(ctx, t);
    TypePtr kty = Type::make_arrow(cps_type(tau), answer());
    std::string k = fresh_cont();
    auto admin_k = [&](TermPtr body) {
      return Term::make_lam(k, kty, std::move(body), /*admin=*/true);
    };
    switch (t->kind) {
      case Term::Kind::Var:
      case Term::Kind::Const:
      case Term::Kind::Lam:
        return admin_k(Term::make_app(Term::make_var(k), psi(ctx, t)));
      case Term::Kind::App: {
        TypePtr fty = infer(ctx, t->fun);
        std::string y = fresh("y");
        // [[MN]] = \k. [[M]] (\y. [[N]] (y k))
        TermPtr inner = Term::make_app(
            cps(ctx, t->arg),
            Term::make_app(Term::make_var(y), Term::make_var(k)));
        TermPtr cont = Term::make_lam(y, cps_type(fty), inner, /*admin=*/true);
        return admin_k(Term::make_app(cps(ctx, t->fun), cont));
      }
      case Term::Kind::BoxIn: {
        if (!is_value(t->body))
          throw CpsError("cps requires restricted terms (box bodies values)");
        std::vector<Binder> binders;
        std::vector<TermPtr> box_args;
        std::vector<std::string> ys;
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          std::string y = fresh("y");
          ys.push_back(y);
          binders.push_back({t->binders[i].name, cps_type(t->binders[i].type)});
          box_args.push_back(Term::make_var(y));
        }
        TypingContext body_ctx;
        for (const auto& b : t->binders) body_ctx.push(b.name, b.type);
        TermPtr core = Term::make_app(
            Term::make_var(k),
            Term::make_box(std::move(binders), std::move(box_args),
                           psi(body_ctx, t->body)));
        // [[Ms]](\ys. k (box [xs] <- [ys] in Psi V)), nested right-to-left.
        for (std::size_t i = t->args.size(); i-- > 0;) {
          TypePtr aty = infer(ctx, t->args[i]);
          core = Term::make_app(
              cps(ctx, t->args[i]),
              Term::make_lam(ys[i], cps_type(aty), core, /*admin=*/true));
        }
        return admin_k(core);
      }
      case Term::Kind::Let:
        throw CpsError("cps is defined on call-by-value terms, not let terms");
    }
    throw CpsError("unreachable");
  }

  // ------------------------------------------------ modified transform
  TermPtr cpsx(const TypingContext& ctx, const TermPtr& t) {
    TypePtr tau = infer(ctx, t);
    TypePtr kty = Type::make_arrow(cpsx_type(tau), answer());
    std::string k = fresh_cont();
    auto admin_k = [&](TermPtr body) {
      return Term::make_lam(k, kty, std::move(body), /*admin=*/true);
    };
    switch (t->kind) {
      case Term::Kind::Var:
        return admin_k(Term::make_app(Term::make_var(k), t));
      case Term::Kind::Const:
        return admin_k(Term::make_app(
            Term::make_var(k), Term::make_const(t->name, cpsx_type(t->ann))));
      case Term::Kind::Lam: {
        TypingContext inner = ctx;
        inner.push(t->name, t->ann);
        TypePtr bty = infer(inner, t->body);
        std::string k2 = fresh_cont();
        TermPtr val = Term::make_lam(
            k2, Type::make_arrow(cpsx_type(bty), answer()),
            Term::make_lam(t->name, cpsx_type(t->ann),
                           Term::make_app(cpsx(inner, t->body), Term::make_var(k2))));
        return admin_k(Term::make_app(Term::make_var(k), val));
      }
      case Term::Kind::App: {
        TypePtr fty = infer(ctx, t->fun);
        std::string y = fresh("y");
        TermPtr inner = Term::make_app(
            cpsx(ctx, t->arg),
            Term::make_app(Term::make_var(y), Term::make_var(k)));
        TermPtr cont = Term::make_lam(y, cpsx_type(fty), inner, /*admin=*/true);
        return admin_k(Term::make_app(cpsx(ctx, t->fun), cont));
      }
      case Term::Kind::BoxIn: {
        // \k. [[Ns]]x (\ys. k (box [zs] <- [ys] in \h. zs (\xs. [[M]]x h)))
        TypingContext body_ctx;
        for (const auto& b : t->binders) body_ctx.push(b.name, b.type);
        TypePtr mty = infer(body_ctx, t->body);
        std::string h = fresh_cont();
        std::vector<std::string> ys, zs;
        std::vector<Binder> zbinders;
        std::vector<TermPtr> zargs;
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          ys.push_back(fresh("y"));
          zs.push_back(fresh("z"));
          TypePtr sx = cpsx_type(t->binders[i].type);
          zbinders.push_back(
              {zs.back(), Type::make_arrow(Type::make_arrow(sx, answer()), answer())});
          zargs.push_back(Term::make_var(ys[i]));
        }
        TermPtr core = Term::make_app(cpsx(body_ctx, t->body), Term::make_var(h));
        for (std::size_t i = t->args.size(); i-- > 0;) {
          TermPtr lam = Term::make_lam(t->binders[i].name,
                                       cpsx_type(t->binders[i].type), core);
          core = Term::make_app(Term::make_var(zs[i]), lam);
        }
        TermPtr boxed = Term::make_box(
            std::move(zbinders), std::move(zargs),
            Term::make_lam(h, Type::make_arrow(cpsx_type(mty), answer()), core));
        TermPtr acc = Term::make_app(Term::make_var(k), boxed);
        for (std::size_t i = t->args.size(); i-- > 0;) {
          TypePtr aty = infer(ctx, t->args[i]);
          acc = Term::make_app(
              cpsx(ctx, t->args[i]),
              Term::make_lam(ys[i], cpsx_type(aty), acc, /*admin=*/true));
        }
        return admin_k(acc);
      }
      case Term::Kind::Let:
        throw CpsError("cpsx is defined on call-by-value terms, not let terms");
    }
    throw CpsError("unreachable");
  }

  // ------------------------------------------- continuation-monad ceil
  TermPtr do_ceil(const TypingContext& ctx, const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Var: return t;
      case Term::Kind::Const: return Term::make_const(t->name, ceil_type(t->ann));
      case Term::Kind::Lam: {
        TypingContext inner = ctx;
        inner.push(t->name, t->ann);
        return Term::make_lam(t->name, ceil_type(t->ann), do_ceil(inner, t->body));
      }
      case Term::Kind::App:
        return Term::make_app(do_ceil(ctx, t->fun), do_ceil(ctx, t->arg));
      case Term::Kind::Let: {
        TypePtr bty = infer(ctx, t->bound);
        TypingContext inner = ctx;
        inner.push(t->name, bty);
        return substitute(do_ceil(inner, t->body), t->name, do_ceil(ctx, t->bound));
      }
      case Term::Kind::BoxIn: {
        // \k. [N1](\x1. ... [Nn](\xn. k [M])), binders freshened against
        // the argument images they scope over.
        TypingContext body_ctx;
        for (const auto& b : t->binders) body_ctx.push(b.name, b.type);
        TypePtr mty = infer(body_ctx, t->body);
        std::string k = fresh("k");
        TermPtr body = t->body;
        std::vector<std::string> xs;
        for (const auto& b : t->binders) {
          std::string x = fresh(b.name);
          if (x != b.name) body = substitute(body, b.name, Term::make_var(x));
          xs.push_back(x);
        }
        TypingContext fresh_ctx;
        for (std::size_t i = 0; i < xs.size(); ++i)
          fresh_ctx.push(xs[i], t->binders[i].type);
        TermPtr core = Term::make_app(Term::make_var(k), do_ceil(fresh_ctx, body));
        for (std::size_t i = t->args.size(); i-- > 0;)
          core = Term::make_app(
              do_ceil(ctx, t->args[i]),
              Term::make_lam(xs[i], ceil_type(t->binders[i].type), core));
        return Term::make_lam(
            k, Type::make_arrow(ceil_type(mty), Type::make_atom(kCeilAnswerAtom)),
            core);
      }
    }
    throw CpsError("unreachable");
  }
};

}  // namespace

TypePtr cps_type(const TypePtr& ty) {
  switch (ty->kind) {
    case Type::Kind::Atom: return ty;
    case Type::Kind::Arrow:
      return Type::make_arrow(Type::make_arrow(cps_type(ty->cod), answer()),
                              Type::make_arrow(cps_type(ty->dom), answer()));
    case Type::Kind::Box: return Type::make_box(cps_type(ty->boxed));
  }
  return ty;
}

TypePtr cpsx_type(const TypePtr& ty) {
  switch (ty->kind) {
    case Type::Kind::Atom: return ty;
    case Type::Kind::Arrow:
      return Type::make_arrow(Type::make_arrow(cpsx_type(ty->cod), answer()),
                              Type::make_arrow(cpsx_type(ty->dom), answer()));
    case Type::Kind::Box:
      return Type::make_box(Type::make_arrow(
          Type::make_arrow(cpsx_type(ty->boxed), answer()), answer()));
  }
  return ty;
}

TypePtr ceil_type(const TypePtr& ty) {
  TypePtr p0 = Type::make_atom(kCeilAnswerAtom);
  switch (ty->kind) {
    case Type::Kind::Atom: return ty;
    case Type::Kind::Arrow:
      return Type::make_arrow(ceil_type(ty->dom), ceil_type(ty->cod));
    case Type::Kind::Box:
      return Type::make_arrow(Type::make_arrow(ceil_type(ty->boxed), p0), p0);
  }
  return ty;
}

TermPtr cps_term(const TypingContext& ctx, const TermPtr& t) {
  Transformer tr(t);
  return strip_admin(tr.cps(ctx, t));
}

TermPtr cps_value(const TypingContext& ctx, const TermPtr& v) {
  Transformer tr(v);
  return strip_admin(tr.psi(ctx, v));
}

TermPtr cpsx_term(const TypingContext& ctx, const TermPtr& t) {
  Transformer tr(t);
  return strip_admin(tr.cpsx(ctx, t));
}

TermPtr ceil(const TypingContext& ctx, const TermPtr& t) {
  Transformer tr(t);
  return tr.do_ceil(ctx, t);
}

namespace {

// Contracts the leftmost-outermost beta redex whose operator lambda is
// admin-tagged; null when none is left.
TermPtr contract_admin(const TermPtr& t) {
  if (t->kind == Term::Kind::App && t->fun->kind == Term::Kind::Lam &&
      t->fun->admin)
    return substitute(t->fun->body, t->fun->name, t->arg);
  for (int i = 0; i < child_count(t); ++i) {
    if (TermPtr c = contract_admin(child_at(t, i))) return with_child(t, i, c);
  }
  return nullptr;
}

}  // namespace

TermPtr admin_nf(const TypingContext& ctx, const TermPtr& t, const std::string& k) {
  Transformer tr(t);
  TermPtr cur = Term::make_app(tr.cps(ctx, t), Term::make_var(k));
  while (TermPtr next = contract_admin(cur)) cur = next;
  return strip_admin(cur);
}

std::optional<CpsClass> classify_cps(const TermPtr& t) {
  struct Flags {
    bool v = false, k = false, a = false;
  };
  std::function<Flags(const TermPtr&)> rec = [&](const TermPtr& u) -> Flags {
    Flags f;
    switch (u->kind) {
      case Term::Kind::Const: f.v = true; return f;
      case Term::Kind::Var:
        (is_cont_name(u->name) ? f.k : f.v) = true;
        return f;
      case Term::Kind::Lam: {
        Flags b = rec(u->body);
        if (is_cont_name(u->name)) {
          f.v = b.k;  // \k.K is a value; \k.A only occurs applied
        } else {
          f.k = b.a;  // \x.A
        }
        return f;
      }
      case Term::Kind::App: {
        Flags ff = rec(u->fun), fa = rec(u->arg);
        f.k = ff.v && fa.k;  // VK
        f.a = (ff.k && fa.v) ||
              (u->fun->kind == Term::Kind::Lam && is_cont_name(u->fun->name) &&
               rec(u->fun->body).a && fa.k);  // KV | (\k.A)K
        return f;
      }
      case Term::Kind::BoxIn: {
        bool ok = true;
        for (const auto& b : u->binders) ok &= !is_cont_name(b.name);
        for (const auto& a : u->args) ok &= rec(a).v;
        ok &= rec(u->body).v;
        f.v = ok;
        return f;
      }
      case Term::Kind::Let: return f;
    }
    return f;
  };
  Flags f = rec(t);
  if (f.v) return CpsClass::Value;
  if (f.k) return CpsClass::Continuation;
  if (f.a) return CpsClass::Answer;
  return std::nullopt;
}

TypePtr icps_type(const TypePtr& ty) {
  switch (ty->kind) {
    case Type::Kind::Atom: return ty;
    case Type::Kind::Box: return Type::make_box(icps_type(ty->boxed));
    case Type::Kind::Arrow: {
      // ([[t]] -> R) -> [[s]] -> R
      const TypePtr& d = ty->dom;
      const TypePtr& c = ty->cod;
      bool shape = d->kind == Type::Kind::Arrow && c->kind == Type::Kind::Arrow &&
                   d->cod->kind == Type::Kind::Atom && d->cod->atom == kAnswerAtom &&
                   c->cod->kind == Type::Kind::Atom && c->cod->atom == kAnswerAtom;
      if (!shape)
        throw CpsError("type " + print_type(ty) + " is not in the CPS image");
      return Type::make_arrow(icps_type(c->dom), icps_type(d->dom));
    }
  }
  throw CpsError("unreachable");
}

namespace {

struct Icps {
  TypingContext env;  // CPS-side types of free variables

  TypePtr try_env_infer(const TermPtr& t) {
    try {
      return infer(env, t);
    } catch (const TypeError&) {
      return nullptr;
    }
  }

  TermPtr value(const TermPtr& v) {
    switch (v->kind) {
      case Term::Kind::Const:
        return Term::make_const(v->name, icps_type(v->ann));
      case Term::Kind::Var: return v;
      case Term::Kind::BoxIn: {
        std::vector<Binder> binders;
        std::vector<TermPtr> args;
        TypingContext saved = env;
        for (std::size_t i = 0; i < v->args.size(); ++i) {
          binders.push_back({v->binders[i].name, icps_type(v->binders[i].type)});
          args.push_back(value(v->args[i]));
        }
        TypingContext body_env;
        for (const auto& b : v->binders) body_env.push(b.name, b.type);
        env = body_env;
        TermPtr b = value(v->body);
        env = saved;
        return Term::make_box(std::move(binders), std::move(args), b);
      }
      case Term::Kind::Lam: {
        if (!is_cont_name(v->name)) throw CpsError("value lambda must bind a continuation");
        const TermPtr& body = v->body;
        // icps(\k.k) = \x.x
        if (body->kind == Term::Kind::Var && body->name == v->name) {
          if (!v->ann || v->ann->kind != Type::Kind::Arrow)
            throw CpsError("continuation binder lacks a usable annotation");
          TypePtr xty = icps_type(v->ann->dom);
          std::string x = fresh_name("x", {});
          return Term::make_lam(x, xty, Term::make_var(x));
        }
        // icps(\k.\x.A) = \x.icps(A)
        if (body->kind == Term::Kind::Lam && !is_cont_name(body->name)) {
          TypingContext saved = env;
          env.push(v->name, v->ann);
          env.push(body->name, body->ann);
          TermPtr a = answer_term(body->body);
          env = saved;
          return Term::make_lam(body->name, icps_type(body->ann), a);
        }
        // icps(\k.VK) = \x.icps(VKx)
        TypingContext saved = env;
        env.push(v->name, v->ann);
        TypePtr vk_ty = try_env_infer(body);
        if (!vk_ty || vk_ty->kind != Type::Kind::Arrow)
          throw CpsError("cannot type the body of a continuation value");
        std::string x = fresh_name("x", free_vars(body));
        env.push(x, vk_ty->dom);
        TermPtr a = answer_term(Term::make_app(body, Term::make_var(x)));
        env = saved;
        return Term::make_lam(x, icps_type(vk_ty->dom), a);
      }
      default: throw CpsError("not a CPS value");
    }
  }

  // Continuations map to one-hole contexts, built around kHole.
  TermPtr cont(const TermPtr& kterm) {
    if (kterm->kind == Term::Kind::Var && is_cont_name(kterm->name))
      return Term::make_var(kHole);
    if (kterm->kind == Term::Kind::Lam && !is_cont_name(kterm->name)) {
      TypingContext saved = env;
      env.push(kterm->name, kterm->ann);
      TermPtr a = answer_term(kterm->body);
      env = saved;
      return Term::make_app(Term::make_lam(kterm->name, icps_type(kterm->ann), a),
                            Term::make_var(kHole));
    }
    if (kterm->kind == Term::Kind::App) {
      const TermPtr& v = kterm->fun;
      if (v->kind == Term::Kind::Lam && is_cont_name(v->name))
        return cont(substitute(v->body, v->name, kterm->arg));
      if (v->kind == Term::Kind::Const || v->kind == Term::Kind::Var) {
        TermPtr inner = cont(kterm->arg);
        TermPtr head = v->kind == Term::Kind::Const
                           ? Term::make_const(v->name, icps_type(v->ann))
                           : v;
        return substitute(inner, kHole,
                          Term::make_app(head, Term::make_var(kHole)));
      }
    }
    throw CpsError("not a CPS continuation");
  }

  TermPtr answer_term(const TermPtr& a) {
    if (a->kind == Term::Kind::App) {
      const TermPtr& f = a->fun;
      // (\k.A)K
      if (f->kind == Term::Kind::Lam && is_cont_name(f->name) &&
          classify_cps(a->arg) == CpsClass::Continuation)
        return answer_term(substitute(f->body, f->name, a->arg));
      // KV
      if (classify_cps(f) == CpsClass::Continuation) {
        TermPtr c = cont(f);
        return substitute(c, kHole, value(a->arg));
      }
    }
    throw CpsError("not a CPS answer");
  }
};

}  // namespace

TermPtr icps(const TermPtr& t, const TypingContext& env) {
  Icps tr{env};
  auto cls = classify_cps(t);
  if (!cls) throw CpsError("term is not in the CPS language");
  switch (*cls) {
    case CpsClass::Value: return tr.value(t);
    case CpsClass::Continuation: return tr.cont(t);
    case CpsClass::Answer: return tr.answer_term(t);
  }
  throw CpsError("unreachable");
}

TypingContext map_context(const TypingContext& ctx, TypePtr (*f)(const TypePtr&)) {
  TypingContext out;
  for (const auto& [name, ty] : ctx.entries()) out.push(name, f(ty));
  return out;
}

}  // namespace lbx::cps
