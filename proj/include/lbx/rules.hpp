#pragma once

#include <string>
#include <vector>

#include "lbx/term.hpp"
#include "lbx/typing.hpp"

namespace lbx {

enum class Calc { Cbn, Cbv, CompC, S4Eq };

Calc calc_from_name(const std::string& name);  // "cbn" | "cbv" | "comp" | "s4"
std::string calc_name(Calc c);

enum class Rule {
  // const-n
  BetaArrow, EtaArrow, IdBox, BetaBox,
  // const-v additions (IdBox is shared)
  IdArrow, BetaArrowV, EtaArrowV, Lift, Flat, BetaOmega, BetaBoxV,
  // const-c additions
  IdLet, BetaLetV, CompLet, LetIntro,
};

std::string rule_name(Rule r);

struct Step {
  Rule rule;
  std::vector<int> pos;  // path of child indices to the rewritten node
  TermPtr result;        // whole-term result of firing the rule there
};

// All rule applications in t under full congruence (reduction anywhere).
// The context is only needed to annotate the lambda created by `flat`;
// on terms where that local type cannot be inferred the flat redex is
// skipped, which never happens for typable inputs.
std::vector<Step> redexes(const TermPtr& t, Calc calc,
                          const TypingContext& ctx = {});

struct NormResult {
  TermPtr term;
  long steps = 0;
  bool fuel_exhausted = false;
  std::vector<Step> trace;  // filled only when requested
};

inline constexpr long kDefaultFuel = 100000;

// Leftmost-outermost normalization. The result is strategy-independent on
// typable (and, for cbv/comp, restricted) terms by confluence.
NormResult normalize(const TermPtr& t, Calc calc, long fuel = kDefaultFuel,
                     const TypingContext& ctx = {}, bool want_trace = false);

struct FuelExhausted : std::runtime_error {
  FuelExhausted() : std::runtime_error("fuel exhausted during normalization") {}
};

// Normal-form equality; throws FuelExhausted outside the termination
// guarantee.
bool calc_eq(const TermPtr& a, const TermPtr& b, Calc calc,
             long fuel = kDefaultFuel, const TypingContext& ctx = {});

// Value and restricted-term classifiers of the call-by-value calculus.
bool is_value(const TermPtr& t);
// Every box subterm has a value body.
bool is_restricted(const TermPtr& t);

struct CriticalPairCase {
  std::string name;
  TermPtr term;
  Step left, right;
  bool joined;
};

// The four cbn critical-pair schemas, instantiated with small concrete
// terms; `joined` records that both reducts normalize to the same form.
std::vector<CriticalPairCase> critical_pair_suite();

// The two essential comp critical pairs (let-intro vs id-box, let-intro
// vs beta-box-v).
std::vector<CriticalPairCase> comp_critical_pair_suite();

// Bounded breadth-first reachability a ->* b (0 or more steps) using the
// rules of `calc` restricted to `allowed` (empty = all rules of the
// calculus). Returns 1 if found, 0 if the full search space was exhausted
// without finding b, -1 if the bounds were hit (inconclusive).
int reachable(const TermPtr& a, const TermPtr& b, Calc calc,
              const std::vector<Rule>& allowed, int max_depth,
              std::size_t max_nodes, const TypingContext& ctx = {},
              bool at_least_one = false);

}  // namespace lbx
