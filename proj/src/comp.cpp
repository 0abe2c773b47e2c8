#include "lbx/comp.hpp"

#include "lbx/rules.hpp"

namespace lbx::comp {

TermPtr let_encode(const TypingContext& ctx, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: return t;
    case Term::Kind::Lam: {
      TypingContext inner = ctx;
      inner.push(t->name, t->ann);
      return Term::make_lam(t->name, t->ann, let_encode(inner, t->body), t->admin);
    }
    case Term::Kind::App:
      return Term::make_app(let_encode(ctx, t->fun), let_encode(ctx, t->arg));
    case Term::Kind::Let: {
      TypePtr bty = infer(ctx, t->bound);
      TypingContext inner = ctx;
      inner.push(t->name, bty);
      return Term::make_app(Term::make_lam(t->name, bty, let_encode(inner, t->body)),
                            let_encode(ctx, t->bound));
    }
    case Term::Kind::BoxIn: {
      std::vector<TermPtr> args;
      for (const auto& a : t->args) args.push_back(let_encode(ctx, a));
      TypingContext body_ctx;
      for (const auto& b : t->binders) body_ctx.push(b.name, b.type);
      return Term::make_box(t->binders, std::move(args),
                            let_encode(body_ctx, t->body));
    }
  }
  return t;
}

TermPtr floor(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Const:
    case Term::Kind::Var: return t;
    case Term::Kind::Lam: {
      auto b = floor(t->body);
      return b == t->body ? t : Term::make_lam(t->name, t->ann, b, t->admin);
    }
    case Term::Kind::App: {
      auto f = floor(t->fun), a = floor(t->arg);
      return f == t->fun && a == t->arg ? t : Term::make_app(f, a);
    }
    case Term::Kind::Let: {
      auto b = floor(t->bound), d = floor(t->body);
      return b == t->bound && d == t->body ? t : Term::make_let(t->name, b, d);
    }
    case Term::Kind::BoxIn: {
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (is_value(t->args[i])) continue;
        // let y = floor(A) in floor(box [.., x_i, ..] <- [.., y, ..] in M)
        std::set<std::string> avoid = free_vars(t);
        std::string y = fresh_name("y", avoid);
        auto args = t->args;
        args[i] = Term::make_var(y);
        return Term::make_let(y, floor(t->args[i]),
                              floor(Term::make_box(t->binders, std::move(args),
                                                   t->body)));
      }
      // all arguments are values: substitute them simultaneously
      std::vector<std::pair<std::string, TermPtr>> sub;
      for (std::size_t i = 0; i < t->args.size(); ++i)
        sub.push_back({t->binders[i].name, floor(t->args[i])});
      return substitute_parallel(floor(t->body), sub);
    }
  }
  return t;
}

}  // namespace lbx::comp
