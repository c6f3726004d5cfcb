#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lexsat/instance.hpp"

namespace lexsat {

// Random-instance parameters. Identical spec and seed yield a byte-identical
// instance; no satisfiability promise is made.
struct GenSpec {
  std::shared_ptr<const RelationSet> relations;
  int var_count = 0;
  int clause_count = 0;
  double const_prob = 0.0;
  std::uint64_t seed = 0;
};

// m clauses, each a uniformly chosen relation applied to uniformly chosen
// variables (with replacement), each argument independently replaced by a
// random constant with probability const_prob.
Instance generate(const GenSpec& spec);

// Named relation catalogs used by the generator and the test batteries.
// Returns nullptr for unknown names.
std::shared_ptr<const RelationSet> preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace lexsat
