#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexsat/relation.hpp"

namespace lexsat {

enum class Direction { min, max };

// Ordered variable universe. Position 0 is the lexicographically most
// significant variable.
class VarOrder {
 public:
  VarOrder() = default;
  explicit VarOrder(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int pos) const { return names_[pos]; }
  int position(std::string_view name) const;  // -1 if absent
  bool contains(std::string_view name) const { return position(name) >= 0; }

  friend bool operator==(const VarOrder& a, const VarOrder& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> position_;
};

// A clause argument: either a variable (by position) or a constant bit.
class Arg {
 public:
  static Arg variable(int index) { return Arg(index); }
  static Arg constant(bool bit) { return Arg(bit ? -2 : -1); }

  bool is_var() const { return code_ >= 0; }
  bool is_const() const { return code_ < 0; }
  int var() const { return code_; }
  bool const_bit() const { return code_ == -2; }

  friend bool operator==(const Arg&, const Arg&) = default;

 private:
  explicit Arg(int code) : code_(code) {}
  int code_;
};

struct Clause {
  int relation_index;
  std::vector<Arg> args;

  friend bool operator==(const Clause&, const Clause&) = default;
};

// A conjunction of relation applications over an ordered variable universe.
// The universe may declare variables no clause uses; solvers still assign
// them. Immutable after construction.
class Formula {
 public:
  Formula(std::shared_ptr<const RelationSet> relations, VarOrder vars,
          std::vector<Clause> clauses);

  const RelationSet& relation_set() const { return *relations_; }
  const std::shared_ptr<const RelationSet>& relation_set_ptr() const {
    return relations_;
  }
  const VarOrder& vars() const { return vars_; }
  int var_count() const { return vars_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  const Relation& clause_relation(const Clause& c) const {
    return relations_->at(c.relation_index);
  }
  bool has_constant_args() const;

  // Same clauses over a different universe; every used variable must exist
  // (by name) in the new order.
  Formula reindexed(VarOrder new_vars) const;

  friend bool operator==(const Formula& a, const Formula& b) {
    return *a.relations_ == *b.relations_ && a.vars_ == b.vars_ &&
           a.clauses_ == b.clauses_;
  }

 private:
  std::shared_ptr<const RelationSet> relations_;
  VarOrder vars_;
  std::vector<Clause> clauses_;
};

// A total assignment of the variable universe, indexed by position.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  static Assignment zeros(int n) { return Assignment(std::vector<std::uint8_t>(n, 0)); }
  static Assignment ones(int n) { return Assignment(std::vector<std::uint8_t>(n, 1)); }
  // Bit (n-1-i) of `value` becomes position i, so ascending integers
  // enumerate assignments in ascending lexicographic order.
  static Assignment from_uint(std::uint64_t value, int n);
  static Assignment from_string(std::string_view s);

  int size() const { return static_cast<int>(bits_.size()); }
  bool bit(int pos) const { return bits_[pos] != 0; }
  void set_bit(int pos, bool b) { bits_[pos] = b ? 1 : 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::string to_string() const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// --- core operations ------------------------------------------------------

constexpr int kRelationOfBound = 20;

bool evaluate(const Formula& f, const Assignment& a);

// evaluate() against an assignment packed into an integer (position i of an
// n-variable universe at bit n-1-i). Used by enumeration-based oracles.
bool evaluate_packed(const Formula& f, std::uint64_t packed);

std::strong_ordering lex_compare(const Assignment& a, const Assignment& b);

enum class SubstMode { keep_universe, shrink_universe };

// Simultaneously replaces every occurrence of `from` by `to`. Both may be
// variables or constants. With shrink_universe a fully replaced variable is
// dropped from the universe (assignment indices shift); the default keeps
// the universe fixed so indices stay stable.
Formula substitute(const Formula& f, Arg from, Arg to,
                   SubstMode mode = SubstMode::keep_universe);

// The relation defined by the formula over its universe in variable order,
// with the trailing `existential_suffix` variables projected out.
Relation relation_of(const Formula& f, int existential_suffix = 0,
                     std::string name = "defined",
                     int enumeration_bound = kRelationOfBound);

// Sub-word of the assignment restricted to the kept variables, original
// order preserved. `keep` is a set; duplicates are ignored.
Assignment project(const VarOrder& vars, const Assignment& a,
                   std::span<const std::string> keep);

}  // namespace lexsat
