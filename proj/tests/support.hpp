#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lexsat/formula.hpp"
#include "lexsat/generate.hpp"
#include "lexsat/instance.hpp"
#include "lexsat/relation.hpp"

namespace testsup {

using lexsat::Arg;
using lexsat::Clause;
using lexsat::Formula;
using lexsat::Relation;
using lexsat::RelationSet;
using lexsat::VarOrder;

inline std::shared_ptr<const RelationSet> set_of(std::vector<Relation> relations) {
  return std::make_shared<const RelationSet>(std::move(relations));
}

inline Relation rel(const char* name, int arity,
                    std::initializer_list<const char*> tuples) {
  return Relation::from_strings(name, arity, tuples);
}

// Clause arguments given as strings: "0"/"1" are constants, anything else a
// declared variable name.
inline Formula make_formula(
    std::shared_ptr<const RelationSet> set, std::vector<std::string> var_names,
    const std::vector<std::pair<std::string, std::vector<std::string>>>& specs) {
  VarOrder vars(std::move(var_names));
  std::vector<Clause> clauses;
  for (const auto& [rname, args] : specs) {
    Clause c;
    c.relation_index = set->index_of(rname);
    if (c.relation_index < 0) throw std::runtime_error("unknown relation " + rname);
    for (const std::string& a : args) {
      if (a == "0" || a == "1") {
        c.args.push_back(Arg::constant(a == "1"));
      } else {
        int pos = vars.position(a);
        if (pos < 0) throw std::runtime_error("unknown variable " + a);
        c.args.push_back(Arg::variable(pos));
      }
    }
    clauses.push_back(std::move(c));
  }
  return Formula(std::move(set), std::move(vars), std::move(clauses));
}

// All satisfying assignments, packed; independent enumeration oracle.
inline std::vector<std::uint64_t> models_of(const Formula& f) {
  std::vector<std::uint64_t> out;
  std::uint64_t limit = std::uint64_t{1} << f.var_count();
  for (std::uint64_t v = 0; v < limit; ++v) {
    if (lexsat::evaluate_packed(f, v)) out.push_back(v);
  }
  return out;
}

// Coordinate-complemented instance: every relation's tuples bit-flipped and
// every constant argument flipped, so models are exactly the bitwise
// complements of the original models.
inline Formula complement_formula(const Formula& f) {
  std::vector<Relation> flipped;
  for (const Relation& r : f.relation_set().relations()) {
    flipped.push_back(r.bitwise_complement(r.name()));
  }
  auto cset = std::make_shared<const RelationSet>(std::move(flipped));
  std::vector<Clause> clauses = f.clauses();
  for (Clause& c : clauses) {
    for (Arg& a : c.args) {
      if (a.is_const()) a = Arg::constant(!a.const_bit());
    }
  }
  return Formula(std::move(cset), f.vars(), std::move(clauses));
}

// Deterministic mixed battery over the named presets.
inline const std::vector<std::string>& battery_presets() {
  static const std::vector<std::string> presets = {
      "impl", "xor", "affine", "r13", "rhs", "twocnf", "antihorn", "hard", "mixed"};
  return presets;
}

inline lexsat::Instance battery_instance(int index, int max_n, int max_m,
                                         std::uint64_t seed_base = 1000) {
  const auto& presets = battery_presets();
  std::mt19937_64 param_rng(seed_base + static_cast<std::uint64_t>(index));
  lexsat::GenSpec spec;
  spec.relations = lexsat::preset(presets[index % presets.size()]);
  spec.var_count = 1 + static_cast<int>(param_rng() % static_cast<std::uint64_t>(max_n));
  spec.clause_count = 1 + static_cast<int>(param_rng() % static_cast<std::uint64_t>(max_m));
  switch (index % 3) {
    case 0: spec.const_prob = 0.0; break;
    case 1: spec.const_prob = 0.15; break;
    default: spec.const_prob = 0.3; break;
  }
  spec.seed = seed_base * 7919 + static_cast<std::uint64_t>(index);
  return lexsat::generate(spec);
}

}  // namespace testsup
