#include "lbx/typing.hpp"

#include <set>

#include "lbx/parse.hpp"
#include "lbx/rules.hpp"
#include "lbx/s4.hpp"

namespace lbx {

namespace {

[[noreturn]] void mismatch(const std::string& what, const TypePtr& expected,
                           const TypePtr& found) {
  throw TypeError(TypeError::Kind::TypeMismatch,
                  what + ": expected " + print_type(expected) + ", found " +
                      print_type(found));
}

struct Inferer {
  bool elaborate;

  std::pair<TypePtr, TermPtr> go(const TypingContext& ctx, const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::Const: {
        if (!t->ann) {
          // A bare counit/comult only types when applied; see App below.
          throw TypeError(TypeError::Kind::AnnotationRequired,
                          "constant '" + t->name + "' needs a type instance");
        }
        return {t->ann, t};
      }
      case Term::Kind::Var: {
        if (TypePtr ty = ctx.lookup(t->name)) return {ty, t};
        throw TypeError(TypeError::Kind::UnboundVariable,
                        "unbound variable '" + t->name + "'");
      }
      case Term::Kind::Lam: {
        if (!t->ann)
          throw TypeError(TypeError::Kind::AnnotationRequired,
                          "lambda binder '" + t->name + "' lacks an annotation");
        TypingContext inner = ctx;
        inner.push(t->name, t->ann);
        auto [bty, belab] = go(inner, t->body);
        TermPtr out = t;
        if (elaborate && belab != t->body)
          out = Term::make_lam(t->name, t->ann, belab, t->admin);
        return {Type::make_arrow(t->ann, bty), out};
      }
      case Term::Kind::App: {
        // Elaborate a bare modal constant from its argument's type.
        TermPtr fun = t->fun;
        if (fun->kind == Term::Kind::Const && !fun->ann &&
            (s4::is_counit(fun) || s4::is_comult(fun))) {
          auto [aty, aelab] = go(ctx, t->arg);
          if (aty->kind != Type::Kind::Box)
            mismatch("argument of '" + fun->name + "'",
                     Type::make_box(Type::make_atom("_")), aty);
          TermPtr cst = s4::is_counit(fun) ? s4::make_counit(aty->boxed)
                                           : s4::make_comult(aty->boxed);
          TermPtr out = t;
          if (elaborate) out = Term::make_app(cst, aelab);
          return {cst->ann->cod, out};
        }
        auto [fty, felab] = go(ctx, fun);
        auto [aty, aelab] = go(ctx, t->arg);
        if (fty->kind != Type::Kind::Arrow)
          mismatch("application head", Type::make_arrow(aty, Type::make_atom("_")),
                   fty);
        if (!type_eq(fty->dom, aty)) mismatch("application argument", fty->dom, aty);
        TermPtr out = t;
        if (elaborate && (felab != t->fun || aelab != t->arg))
          out = Term::make_app(felab, aelab);
        return {fty->cod, out};
      }
      case Term::Kind::Let: {
        auto [bty, belab] = go(ctx, t->bound);
        TypingContext inner = ctx;
        inner.push(t->name, bty);
        auto [dty, delab] = go(inner, t->body);
        TermPtr out = t;
        if (elaborate && (belab != t->bound || delab != t->body))
          out = Term::make_let(t->name, belab, delab);
        return {dty, out};
      }
      case Term::Kind::BoxIn: {
        if (t->binders.size() != t->args.size())
          throw TypeError(TypeError::Kind::BoxArityMismatch,
                          "box has " + std::to_string(t->binders.size()) +
                              " binders but " + std::to_string(t->args.size()) +
                              " arguments");
        std::vector<TermPtr> args = t->args;
        bool changed = false;
        for (std::size_t i = 0; i < t->args.size(); ++i) {
          auto [aty, aelab] = go(ctx, t->args[i]);
          TypePtr want = Type::make_box(t->binders[i].type);
          if (!type_eq(aty, want))
            mismatch("box argument " + std::to_string(i + 1), want, aty);
          changed |= aelab != t->args[i];
          args[i] = aelab;
        }
        TypingContext body_ctx;  // outer context is discarded
        for (const auto& b : t->binders) body_ctx.push(b.name, b.type);
        TypePtr bty;
        TermPtr belab;
        try {
          std::tie(bty, belab) = go(body_ctx, t->body);
        } catch (const TypeError& e) {
          if (e.error_kind == TypeError::Kind::UnboundVariable) {
            // Distinguish "uses a variable from outside the box" from a
            // genuinely unbound name.
            for (const auto& fv : free_vars(t->body)) {
              bool among = false;
              for (const auto& b : t->binders) among |= b.name == fv;
              if (!among && ctx.lookup(fv))
                throw TypeError(TypeError::Kind::BodyUsesOuterVariable,
                                "box body uses outer variable '" + fv + "'");
            }
          }
          throw;
        }
        TermPtr out = t;
        if (elaborate && (changed || belab != t->body))
          out = Term::make_box(t->binders, std::move(args), belab);
        return {Type::make_box(bty), out};
      }
    }
    throw std::logic_error("infer: unreachable");
  }
};

}  // namespace

TypePtr infer(const TypingContext& ctx, const TermPtr& t) {
  Inferer inf{false};
  return inf.go(ctx, t).first;
}

std::pair<TypePtr, TermPtr> infer_elab(const TypingContext& ctx, const TermPtr& t) {
  Inferer inf{true};
  return inf.go(ctx, t);
}

bool check_subject_reduction(const TypingContext& ctx, const TermPtr& t,
                             const TermPtr& reduct) {
  TypePtr before = infer(ctx, t);
  try {
    TypePtr after = infer(ctx, reduct);
    return type_eq(before, after);
  } catch (const TypeError&) {
    return false;
  }
}

namespace {

// Collects every type occurring in the syntax-directed derivation, plus
// constant annotations separately (they join the subformula base).
void collect_derivation_types(const TypingContext& ctx, const TermPtr& t,
                              std::vector<TypePtr>& types,
                              std::vector<TypePtr>& const_anns) {
  switch (t->kind) {
    case Term::Kind::Const:
      types.push_back(t->ann);
      const_anns.push_back(t->ann);
      return;
    case Term::Kind::Var:
      types.push_back(infer(ctx, t));
      return;
    case Term::Kind::Lam: {
      types.push_back(infer(ctx, t));
      types.push_back(t->ann);
      TypingContext inner = ctx;
      inner.push(t->name, t->ann);
      collect_derivation_types(inner, t->body, types, const_anns);
      return;
    }
    case Term::Kind::App:
      types.push_back(infer(ctx, t));
      collect_derivation_types(ctx, t->fun, types, const_anns);
      collect_derivation_types(ctx, t->arg, types, const_anns);
      return;
    case Term::Kind::Let: {
      types.push_back(infer(ctx, t));
      collect_derivation_types(ctx, t->bound, types, const_anns);
      TypingContext inner = ctx;
      inner.push(t->name, infer(ctx, t->bound));
      collect_derivation_types(inner, t->body, types, const_anns);
      return;
    }
    case Term::Kind::BoxIn: {
      types.push_back(infer(ctx, t));
      for (const auto& a : t->args) collect_derivation_types(ctx, a, types, const_anns);
      TypingContext body_ctx;
      for (const auto& b : t->binders) {
        body_ctx.push(b.name, b.type);
        types.push_back(b.type);
      }
      collect_derivation_types(body_ctx, t->body, types, const_anns);
      return;
    }
  }
}

}  // namespace

bool subformula_check(const TypingContext& ctx, const TermPtr& t) {
  if (!redexes(t, Calc::Cbn, ctx).empty())
    throw TypeError(TypeError::Kind::NotNormalForm,
                    "subformula_check requires a cbn normal form");
  TypePtr result = infer(ctx, t);
  std::vector<TypePtr> types, base;
  collect_derivation_types(ctx, t, types, base);
  base.push_back(result);
  for (const auto& [_, ty] : ctx.entries()) base.push_back(ty);
  for (const auto& ty : types) {
    bool ok = false;
    for (const auto& b : base)
      if (is_subformula(ty, b)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

}  // namespace lbx
