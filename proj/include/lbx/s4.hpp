#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lbx/term.hpp"
#include "lbx/typing.hpp"

// IS4 extension: counit/comult constants with their equality schemes, the
// strongness and symmetricity schemes, a bounded bidirectional equality
// search (the equations are deliberately unoriented), the boxsub/unbox
// macros, and the dual-context calculus with the ceilx/floorx
// translations.

namespace lbx::s4 {

// counit@s : []s -> s   and   comult@s : []s -> [][]s, realized as
// annotated constants. A null instance is the bare, yet-to-be-elaborated
// form accepted by the parser.
TermPtr make_counit(TypePtr instance);
TermPtr make_comult(TypePtr instance);
bool is_counit(const TermPtr& t);
bool is_comult(const TermPtr& t);
TypePtr instance_type(const TermPtr& t);  // null for bare constants

enum Theory : unsigned {
  TheoryS4 = 1u,      // nat-eps, nat-delta, mon-deltadelta, mon-epsdelta
  TheoryST = 2u,      // strongness (weakening + contraction of box columns)
  TheorySym = 4u,     // symmetricity (exchange of box columns)
  TheoryRulesN = 8u,  // const-n reductions as equality steps
  TheoryAll = TheoryS4 | TheoryST | TheorySym | TheoryRulesN,
};

unsigned theory_from_names(const std::vector<std::string>& names);

struct EqResult {
  bool proven = false;
  // Printed terms interleaved with rule labels along the found path.
  std::vector<std::string> trace;
  std::size_t rewrites_used = 0;  // rewrite applications performed
  std::size_t path_length = 0;    // steps in the found proof
};

// Bidirectional breadth-first search over the congruence closure of the
// selected schemes, up to `budget` rewrite applications. NotFound is not
// a disproof.
EqResult eq_bounded(unsigned theory, const TermPtr& a, const TermPtr& b,
                    std::size_t budget, const TypingContext& ctx = {});

// Bierman-de Paiva macros: box-sub expands to a box over comult'ed
// arguments, unbox to a counit application.
TermPtr boxsub(std::vector<Binder> binders, std::vector<TermPtr> args, TermPtr body);
TermPtr unbox(TermPtr m);

// ---------------------------------------------------------------------
// Dual-context calculus (modal context Delta | ordinary context Gamma).

struct DualTerm;
using DualPtr = std::shared_ptr<const DualTerm>;

struct DualTerm {
  enum class Kind { MVar, Var, Const, Lam, App, BoxUp, LetBox };

  Kind kind;
  std::string name;  // MVar/Var/Const name, Lam binder, LetBox modal binder
  TypePtr ann;       // Const annotation, Lam annotation
  DualPtr fun, arg;  // App
  DualPtr bound;     // LetBox
  DualPtr body;      // Lam, BoxUp, LetBox

  static DualPtr mvar(std::string name);
  static DualPtr var(std::string name);
  static DualPtr constant(std::string name, TypePtr ann);
  static DualPtr lam(std::string binder, TypePtr ann, DualPtr body);
  static DualPtr app(DualPtr fun, DualPtr arg);
  static DualPtr boxup(DualPtr body);
  static DualPtr letbox(std::string binder, DualPtr bound, DualPtr body);
};

bool dual_alpha_eq(const DualPtr& a, const DualPtr& b);
std::set<std::string> dual_free_mvars(const DualPtr& t);
std::set<std::string> dual_free_vars(const DualPtr& t);

struct DualTypeError : std::runtime_error {
  explicit DualTypeError(const std::string& msg) : std::runtime_error(msg) {}
};

// The three displayed rules plus the usual simply typed rules on the
// right-hand context. Box bodies are checked under Delta alone.
TypePtr dual_infer(const TypingContext& delta, const TypingContext& gamma,
                   const DualPtr& t);

// Bounded search over the dual-context equalities (let-box beta, let-box
// eta, commuting conversions).
EqResult dual_eq_bounded(const DualPtr& a, const DualPtr& b, std::size_t budget);

// ceilx: dual-context -> lambda-box with counit/comult. Typing transport:
// a modal a:rho becomes an ordinary a:[]rho.
TermPtr ceilx(const TypingContext& delta, const TypingContext& gamma,
              const DualPtr& t);

// floorx: lambda-box with counit/comult -> dual-context.
DualPtr floorx(const TermPtr& t);

}  // namespace lbx::s4
