#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "lbx/rules.hpp"
#include "lbx/term.hpp"
#include "lbx/typing.hpp"

// Deterministic type-directed term generator; the property suites run on
// its output. Same config, same sequence.

namespace lbx::gen {

struct GenConfig {
  std::uint64_t seed = 1;
  int max_size = 25;  // AST node budget
  Calc calculus = Calc::Cbn;
  int type_depth = 2;
  bool restricted = false;  // force box bodies to be values
};

struct GenError : std::runtime_error {
  explicit GenError(const std::string& m) : std::runtime_error(m) {}
};

// Deterministic splittable generator state (splitmix64).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform-ish integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::uint64_t state_;
};

std::pair<TypingContext, TermPtr> gen_term(const GenConfig& cfg);
std::vector<std::pair<TypingContext, TermPtr>> gen_terms(const GenConfig& cfg,
                                                         int count);

// Two independently generated terms sharing one context and goal type.
std::tuple<TypingContext, TermPtr, TermPtr> gen_pair(const GenConfig& cfg);

// Applies up to `max_steps` randomly chosen steps of the calculus;
// the result is equal to t in the calculus by construction.
TermPtr random_rewrite(const TermPtr& t, Calc calc, int max_steps,
                       std::uint64_t seed, const TypingContext& ctx);

}  // namespace lbx::gen
