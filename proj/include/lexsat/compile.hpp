#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "lexsat/classify.hpp"
#include "lexsat/formula.hpp"
#include "lexsat/relation.hpp"

namespace lexsat {

enum class CompiledKind { two_cnf, horn_cnf, anti_horn_cnf, linear_system };

Property property_for_kind(CompiledKind kind);

struct Literal {
  int var;
  bool positive;

  friend auto operator<=>(const Literal&, const Literal&) = default;
};

// A disjunction of literals. No variable appears with both polarities;
// tautological inputs are rejected at construction (make() returns nullopt).
// The empty clause is the contradiction.
class CnfClause {
 public:
  static std::optional<CnfClause> make(std::vector<Literal> literals);
  static CnfClause contradiction() { return CnfClause({}); }

  const std::vector<Literal>& literals() const { return literals_; }
  bool empty() const { return literals_.empty(); }
  bool satisfied_by(const Assignment& a) const;

  friend bool operator==(const CnfClause&, const CnfClause&) = default;

 private:
  explicit CnfClause(std::vector<Literal> lits) : literals_(std::move(lits)) {}
  std::vector<Literal> literals_;  // sorted by (var, positive), deduplicated
};

// XOR of the listed variables equals rhs. Empty variable set with rhs 1
// encodes inconsistency; with rhs 0 the equation is trivial.
struct LinearEquation {
  std::vector<int> vars;  // sorted, unique
  bool rhs;

  // Builds from a possibly repeated variable list; duplicate pairs cancel.
  static LinearEquation make(std::vector<int> vars_with_repeats, bool rhs);

  bool inconsistent() const { return vars.empty() && rhs; }
  bool trivial() const { return vars.empty() && !rhs; }
  bool satisfied_by(const Assignment& a) const;

  friend bool operator==(const LinearEquation&, const LinearEquation&) = default;
};

struct CompiledForm {
  CompiledKind kind;
  int var_count;
  std::vector<CnfClause> clauses;         // CNF kinds
  std::vector<LinearEquation> equations;  // linear_system

  bool satisfied_by(const Assignment& a) const;
};

// Entailed clauses (or equations) of the kind's syntactic shape over the
// relation's coordinates 0..k-1; their conjunction defines exactly the
// relation. Results are memoized per (table, kind); the reference stays
// valid for the lifetime of the process.
struct RelationCompilation {
  std::vector<CnfClause> clauses;
  std::vector<LinearEquation> equations;
};

const RelationCompilation& compile_relation(const Relation& r, CompiledKind kind);

// Instantiates the per-relation compilation on each clause's arguments.
// Constant arguments are folded (a satisfied literal drops the clause, a
// falsified one drops the literal; equations absorb constants into the rhs)
// and repeated variables merge.
CompiledForm compile_formula(const Formula& f, CompiledKind kind);

}  // namespace lexsat
