#pragma once

#include "lbx/term.hpp"
#include "lbx/typing.hpp"

// Bridges between the computational calculus and the call-by-value
// calculus: the let encoding and the box-eliminating translation used to
// reduce its termination to the let fragment.

namespace lbx::comp {

// Replaces every `let x = N in M` by `(\x:ty(N). M) N`; needs typability
// to annotate the lambda.
TermPtr let_encode(const TypingContext& ctx, const TermPtr& t);

// Box elimination: a box with all-value arguments substitutes them into
// the body, a leftmost non-value argument is let-extracted first. The
// output is box-free. Input must be typable and restricted.
TermPtr floor(const TermPtr& t);

}  // namespace lbx::comp
