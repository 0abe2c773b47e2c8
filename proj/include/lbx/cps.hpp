#pragma once

#include <optional>
#include <string>

#include "lbx/term.hpp"
#include "lbx/typing.hpp"

// The CPS transformation from the call-by-value calculus into the
// call-by-name calculus, its administrative normal forms, the stratified
// CPS language with its inverse translation, the continuation-monad
// translation, and the modified full-term transformation.

namespace lbx::cps {

struct CpsError : std::runtime_error {
  explicit CpsError(const std::string& msg) : std::runtime_error(msg) {}
};

// [[p]] = p, [[s -> t]] = ([[t]] -> R) -> [[s]] -> R, [[ []s ]] = [][[s]].
TypePtr cps_type(const TypePtr& ty);

// Term transformation [[ - ]] and value transformation Psi. Both need the
// context to annotate the continuation binders; inputs must be typable
// restricted call-by-value terms.
TermPtr cps_term(const TypingContext& ctx, const TermPtr& t);
TermPtr cps_value(const TypingContext& ctx, const TermPtr& v);

// Administrative normal form of [[t]] k: transformation-introduced
// lambdas are tagged, their beta redexes contracted to a fixed point,
// and the tags stripped.
TermPtr admin_nf(const TypingContext& ctx, const TermPtr& t, const std::string& k);

enum class CpsClass { Value, Continuation, Answer };
std::optional<CpsClass> classify_cps(const TermPtr& t);

// Inverse translation of the CPS language. Values and answers map to
// call-by-value terms; continuations map to one-hole evaluation contexts
// (the hole is the reserved variable `_`). `env` supplies CPS-side types
// of free variables, needed to annotate binders that the clauses invent.
TermPtr icps(const TermPtr& t, const TypingContext& env = {});
// Partial inverse of cps_type; throws CpsError off the image.
TypePtr icps_type(const TypePtr& ty);

// Continuation-monad translation: boxes become double negations at the
// P0 answer atom, lets substitute. Output is box- and let-free.
TypePtr ceil_type(const TypePtr& ty);
TermPtr ceil(const TypingContext& ctx, const TermPtr& t);

// Modified full-term CPS of unrestricted terms:
// [[ []s ]]x = []( ([[s]]x -> R) -> R ), boxes carry suspended bodies.
TypePtr cpsx_type(const TypePtr& ty);
TermPtr cpsx_term(const TypingContext& ctx, const TermPtr& t);

// Context translated pointwise by `f`.
TypingContext map_context(const TypingContext& ctx, TypePtr (*f)(const TypePtr&));

}  // namespace lbx::cps
