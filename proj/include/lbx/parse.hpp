#pragma once

#include <stdexcept>
#include <string>

#include "lbx/term.hpp"

// Concrete syntax.
//
//   Type:  atom `p`, reserved `R`;  `T -> T` (right assoc);  `[]T`;  `(T)`.
//   Term:  `x`;  `c:T`;  `\x:T. M`;  application by juxtaposition;
//          `box [x1:T1, ..., xn:Tn] <- [N1, ..., Nn] in M`;
//          `let x = N in M`;  `counit@T`, `comult@T` (or bare).
//   Comments run from `--` to end of line.
//
// Continuation variables (`%k`, `%h1`, ...) are accepted only when the
// CpsVars flag is set; they appear in CPS-language files.

namespace lbx {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(col)),
        line(line), col(col) {}
};

enum ParseFlags : unsigned {
  ParseDefault = 0,
  ParseCpsVars = 1,  // allow %-prefixed continuation variables
};

TypePtr parse_type(const std::string& src);
TermPtr parse_term(const std::string& src, unsigned flags = ParseDefault);

std::string print_type(const TypePtr& ty);
std::string print_term(const TermPtr& t);

}  // namespace lbx

#include "lbx/s4.hpp"

namespace lbx {

// Dual-context grammar extension: modal variables `@a`, `boxup M`,
// `let box a = N in M`.
s4::DualPtr parse_dual(const std::string& src);
std::string print_dual(const s4::DualPtr& t);

}  // namespace lbx
