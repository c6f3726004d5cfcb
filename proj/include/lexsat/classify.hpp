#pragma once

#include <string>
#include <string_view>

#include "lexsat/formula.hpp"
#include "lexsat/relation.hpp"

namespace lexsat {

enum class Property { zero_valid, one_valid, horn, anti_horn, bijunctive, affine };

std::string_view property_name(Property p);

// Closure-based property test: zero/one-valid by membership of the constant
// tuple, horn/anti-horn by closure under coordinatewise AND/OR, bijunctive by
// closure under coordinatewise majority, affine by closure under ternary XOR.
// The empty relation has all four closure properties and neither validity.
bool has_property(const Relation& r, Property p);

constexpr int kOracleArityBound = 4;

// Exponential definitional check, meant for cross-validation at small arity:
// collects every clause (or linear equation) of the property's syntactic
// shape that all tuples satisfy and tests whether the conjunction defines
// exactly the relation. Only the four closure properties are meaningful here.
bool definitional_oracle(const Relation& r, Property p);

Taxonomy classify_relation(const Relation& r);

// Per-property AND over all relations; the result is cached on the set.
Taxonomy classify_set(const RelationSet& s);

struct DispatchVerdict {
  bool with_constants_poly;
  bool without_constants_poly;
  // Property that triggered the verdict for the queried (constants,
  // direction) combination, or "none".
  std::string reason;
};

DispatchVerdict dispatch_verdict(const RelationSet& s, bool allow_constants,
                                 Direction direction);

}  // namespace lexsat
