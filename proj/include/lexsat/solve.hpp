#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "lexsat/classify.hpp"
#include "lexsat/formula.hpp"

namespace lexsat {

enum class Method { two_cnf, horn, anti_horn, affine, generic };

std::string_view method_name(Method m);

// Fixed values for a subset of variables, applied as constant restriction of
// each clause relation (which preserves all four closure properties).
class PartialFix {
 public:
  void set(int var, bool bit);
  std::optional<bool> get(int var) const;
  const std::map<int, bool>& entries() const { return fixed_; }
  bool empty() const { return fixed_.empty(); }

 private:
  std::map<int, bool> fixed_;
};

enum class Status { sat, unsat };

struct SolveStats {
  std::int64_t decision_calls = 0;
  double millis = 0.0;
};

struct SolveResult {
  Status status = Status::unsat;
  std::optional<Assignment> assignment;  // present iff sat
  SolveStats stats;
  std::string method;  // solver path actually taken

  bool sat() const { return status == Status::sat; }
};

// True iff some total assignment extending the fix satisfies the formula.
// two_cnf: implication-graph strong connectivity; horn / anti_horn: unit
// propagation of forced ones / zeros; affine: elimination over GF(2);
// generic: chronological backtracking with per-clause tuple pruning.
bool decide_sat(const Formula& f, const PartialFix& fix, Method method);

// Greedy per-variable optimization: one satisfiability check up front, then
// one per variable, most significant first, trying the preferred bit (0 for
// min, 1 for max) and keeping the complement when it fails. Exactly n+1
// decision calls on satisfiable inputs, 1 on unsatisfiable ones.
SolveResult lex_opt(const Formula& f, Direction direction, Method method);

enum class Fallback { allow, forbid };

// Selects the solving path from the set's taxonomy: validity shortcut first
// (all-zeros / all-ones when no constants are involved), then horn,
// anti_horn, two_cnf, affine, and finally the exponential generic path if
// allowed.
SolveResult dispatch(const Formula& f, bool allow_constants,
                     Direction direction, Fallback fallback);

constexpr int kBruteForceBound = 24;

// Reference semantics: enumerate assignments in lexicographic order and
// return the first satisfying one. Independent of the compiled solvers.
SolveResult brute_force_lex_opt(const Formula& f, Direction direction,
                                int bound = kBruteForceBound);

// Is there a satisfying assignment other than all-zeros and all-ones?
// Decided through O(n^2) decide_sat calls with one variable fixed to 1 and
// another to 0.
bool sat_nontrivial(const Formula& f);

// Does the least significant (largest) variable get value 1 in the
// lexicographically optimal assignment? Unsatisfiable formulas answer false.
bool odd_opt(const Formula& f, Direction direction, bool allow_constants);

// Dispatch priority over the taxonomy's closure properties; generic if none.
Method method_for(const Taxonomy& t);

}  // namespace lexsat
