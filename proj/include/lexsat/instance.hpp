#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lexsat/formula.hpp"

namespace lexsat {

// A parsed instance file: the declared relation catalog plus the formula.
struct Instance {
  std::shared_ptr<const RelationSet> relations;
  Formula formula;
};

// Line-oriented text format, '#' starts a comment:
//   relation NAME ARITY TUPLE...   tuples as bitstrings
//   vars V1 V2 ... Vn              declaration order = significance order
//   clause NAME ARG...             ARG is a declared variable or 0/1
// Exactly one vars line; relations must be declared before use. Rejects
// duplicate names, arity mismatches and undeclared variables with
// line/column diagnostics.
Instance parse_instance(std::string_view text);

// Canonical text form; parses back to an equal instance. Leading comment
// lines (without the '#') may be prepended.
std::string serialize_instance(const RelationSet& relations, const Formula& formula,
                               const std::vector<std::string>& comments = {});

}  // namespace lexsat
