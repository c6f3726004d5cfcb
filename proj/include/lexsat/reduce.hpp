#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexsat/compile.hpp"
#include "lexsat/formula.hpp"
#include "lexsat/solve.hpp"

namespace lexsat {

constexpr std::int64_t kDefaultGadgetStepCap = 4'000'000;

// Bounds for the exhaustive gadget search. Existence results guarantee
// gadgets but not their size, so "not found within budget" is a value.
struct SearchBudget {
  int max_clauses = 3;
  int max_aux = 2;
  bool allow_constants = false;
  std::int64_t step_cap = kDefaultGadgetStepCap;
};

// A formula over S whose defined relation, after projecting out the trailing
// existential variables, equals the target exactly. The formula's universe
// is x1..xk (the target coordinates) followed by the auxiliaries.
struct Implementation {
  Relation target;
  Formula formula;
  int existential_suffix;
};

// Exhaustive search over conjunctions of at most max_clauses relation
// applications whose arguments range over the target coordinates, up to
// max_aux auxiliary variables and, when allowed, the constants. Candidates
// are enumerated by clause count, then lexicographically by argument
// pattern; the first verified match is returned. Results (including
// not-found) are memoized per (set, target, budget).
std::optional<Implementation> find_implementation(
    const Relation& target, const std::shared_ptr<const RelationSet>& s,
    const SearchBudget& budget);

struct ReductionOutput {
  Formula formula;
  std::vector<std::string> kept;  // original variable names, in order
  std::string case_tag;
  // Gadget positions (in the output universe) with the bits they carry in a
  // genuine encoding of an input optimum; a minimal model disagreeing with
  // them signals that the input was unsatisfiable.
  std::vector<std::pair<int, bool>> forced;

  Assignment project_kept(const Assignment& a) const;
  // Maps a solve result of the output formula back to the input: unsat (or a
  // forced-bit mismatch) stays unsat, otherwise the assignment is projected
  // onto the kept variables.
  SolveResult decode(const SolveResult& r) const;
};

// Replaces constant arguments by fresh variables plus gadgets that pin them.
// Tries, in order: unit gadgets appended after the originals ("unit_gadgets");
// a disequality gadget on a most-significant fresh pair u < v
// ("disequality_prefix"); and, for one-valid sets, an anchoring clause
// R(v,...,v) on the same prefix pair ("one_valid_anchor"). The budget's
// allow_constants flag is ignored: these gadgets must be constant-free.
ReductionOutput remove_constants(const Formula& f, const SearchBudget& budget = {});

// Translates a CNF with at most three literals per clause into a formula
// over S: each clause shape (ternary OR with 0..3 leading negations) is
// realized by a searched gadget (constants allowed), instantiated per clause
// with a fresh block of auxiliaries placed after the original variables.
// Returns nullopt if a needed gadget is not found within budget.
std::optional<ReductionOutput> to_s_formula(
    const std::vector<CnfClause>& cnf, const VarOrder& vars,
    const std::shared_ptr<const RelationSet>& s, SearchBudget budget = {});

// Appends a fresh least-significant variable z tied to the previously least
// significant variable by an equality gadget (constants allowed), so z's bit
// in the minimal model equals that variable's bit.
ReductionOutput append_parity_gadget(const Formula& f, SearchBudget budget = {});

// The same CNF as a formula over the four built-in ternary OR shapes;
// reference semantics for the CNF side of the translation.
Formula cnf_formula(const std::vector<CnfClause>& cnf, VarOrder vars);

}  // namespace lexsat
