#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

// Core term and type representation for the modal lambda calculus.
//
// Terms are immutable values shared through shared_ptr; every operation
// below is pure, so terms may be shared freely across threads.

namespace lbx {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Atom, Arrow, Box };

  Kind kind;
  std::string atom;   // Atom
  TypePtr dom, cod;   // Arrow
  TypePtr boxed;      // Box

  static TypePtr make_atom(std::string name);
  static TypePtr make_arrow(TypePtr dom, TypePtr cod);
  static TypePtr make_box(TypePtr body);
};

// The reserved answer atom of the CPS translations.
inline const std::string kAnswerAtom = "R";
// Answer atom of the continuation-monad translation, kept distinct from R.
inline const std::string kCeilAnswerAtom = "P0";

bool type_eq(const TypePtr& a, const TypePtr& b);

// Reflexive-transitive closure of the immediate-component relation.
bool is_subformula(const TypePtr& sub, const TypePtr& sup);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Binder {
  std::string name;
  TypePtr type;
};

struct Term {
  enum class Kind { Const, Var, Lam, App, BoxIn, Let };

  Kind kind;

  // Const: name + ann (ann may be null only for bare counit/comult before
  // elaboration). Var: name. Lam: name = binder, ann = binder type,
  // body. App: fun, arg. Let: name = binder, bound, body.
  // BoxIn: binders/args (same length), body; binders scope over body only.
  std::string name;
  TypePtr ann;
  TermPtr fun, arg;
  TermPtr bound;
  TermPtr body;
  std::vector<Binder> binders;
  std::vector<TermPtr> args;

  // Set on lambdas introduced by the CPS transformation; contracted away
  // by administrative normalization and stripped from all results.
  bool admin = false;

  static TermPtr make_const(std::string name, TypePtr ann);
  static TermPtr make_var(std::string name);
  static TermPtr make_lam(std::string binder, TypePtr ann, TermPtr body,
                          bool admin = false);
  static TermPtr make_app(TermPtr fun, TermPtr arg);
  static TermPtr make_box(std::vector<Binder> binders, std::vector<TermPtr> args,
                          TermPtr body);
  static TermPtr make_let(std::string binder, TermPtr bound, TermPtr body);
};

// Continuation variables live in a reserved namespace so the CPS language
// classifier is unambiguous. They are ordinary variables otherwise.
bool is_cont_name(const std::string& name);

std::set<std::string> free_vars(const TermPtr& t);

// First name not in `avoid`: base itself, then the base stem with suffixes
// 1, 2, ... Deterministic, so printing is reproducible per run.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);
std::string fresh_cont_name(const std::set<std::string>& avoid);

// Capture-avoiding substitution t[s/x]. Descends into box arguments but
// never into a box body: binders there do not scope over the outside, and
// the body of a typable box has no outer free variables anyway.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

// Simultaneous capture-avoiding substitution.
TermPtr substitute_parallel(const TermPtr& t,
                            const std::vector<std::pair<std::string, TermPtr>>& subst);

// Alpha-equivalence. Box binder lists are compared positionally: exchange
// of two binder/argument columns is not an alpha move.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Alpha-invariant canonical key (de Bruijn rendering); used by the search
// procedures for visited sets and frontier intersection.
std::string canon_key(const TermPtr& t);

// Child indexing for positions: Lam {0:body}; App {0:fun, 1:arg};
// Let {0:bound, 1:body}; BoxIn {0..n-1:args, n:body}.
int child_count(const TermPtr& t);
TermPtr child_at(const TermPtr& t, int i);
TermPtr with_child(const TermPtr& t, int i, TermPtr c);
TermPtr subterm_at(const TermPtr& t, const std::vector<int>& path);
TermPtr replace_at(const TermPtr& t, const std::vector<int>& path, TermPtr repl);

// Strips admin markers from every lambda in t.
TermPtr strip_admin(const TermPtr& t);

std::size_t term_size(const TermPtr& t);

}  // namespace lbx
