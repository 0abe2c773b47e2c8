#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lbx/term.hpp"

namespace lbx {

// Ordered context; lookup returns the rightmost binding (shadowing).
class TypingContext {
 public:
  TypingContext() = default;

  void push(std::string name, TypePtr type) {
    entries_.push_back({std::move(name), std::move(type)});
  }
  void pop() { entries_.pop_back(); }

  TypePtr lookup(const std::string& name) const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      if (it->first == name) return it->second;
    return nullptr;
  }

  const std::vector<std::pair<std::string, TypePtr>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, TypePtr>> entries_;
};

struct TypeError : std::runtime_error {
  enum class Kind {
    UnboundVariable,
    TypeMismatch,
    BoxArityMismatch,
    BodyUsesOuterVariable,
    AnnotationRequired,
    NotNormalForm,
  };
  Kind error_kind;
  TypeError(Kind k, const std::string& msg)
      : std::runtime_error(msg), error_kind(k) {}
};

// Syntax-directed inference; binder annotations make the type unique.
// A box body is checked under exactly the box binders, the outer context
// is discarded. Bare counit/comult constants are elaborated on the fly
// when applied to an argument of box type.
TypePtr infer(const TypingContext& ctx, const TermPtr& t);

// Same, but also returns the term with counit/comult annotations filled in.
std::pair<TypePtr, TermPtr> infer_elab(const TypingContext& ctx, const TermPtr& t);

inline TypePtr infer_closed(const TermPtr& t) { return infer(TypingContext{}, t); }

// True iff the reduct has the same type as t under ctx. Harness helper,
// expected to always hold (subject reduction).
bool check_subject_reduction(const TypingContext& ctx, const TermPtr& t,
                             const TermPtr& reduct);

// Subformula property of call-by-name normal forms: every type in the
// derivation of t is a subformula of a context type, of the result type,
// or of a constant annotation (constants act as axioms). Throws
// NotNormalForm when t still has a cbn redex.
bool subformula_check(const TypingContext& ctx, const TermPtr& t);

}  // namespace lbx
