#include "lexsat/generate.hpp"

#include <random>

#include "lexsat/errors.hpp"

namespace lexsat {

namespace {

// Unbiased bounded draw with a fixed algorithm, so instances are identical
// across platforms for the same seed.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Relation rel(const char* name, int arity, std::initializer_list<const char*> tuples) {
  return Relation::from_strings(name, arity, tuples);
}

std::shared_ptr<const RelationSet> make_set(std::vector<Relation> relations) {
  return std::make_shared<const RelationSet>(std::move(relations));
}

}  // namespace

Instance generate(const GenSpec& spec) {
  if (!spec.relations) throw ContractError("generator needs a relation set");
  if (spec.var_count < 1 || spec.clause_count < 1) {
    throw ContractError("generator needs at least one variable and one clause");
  }
  if (spec.const_prob < 0.0 || spec.const_prob > 1.0) {
    throw ContractError("constant probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<std::string> names;
  names.reserve(spec.var_count);
  for (int i = 0; i < spec.var_count; ++i) names.push_back("x" + std::to_string(i + 1));
  std::vector<Clause> clauses;
  clauses.reserve(spec.clause_count);
  for (int ci = 0; ci < spec.clause_count; ++ci) {
    Clause c;
    c.relation_index = static_cast<int>(
        bounded(rng, static_cast<std::uint64_t>(spec.relations->size())));
    int arity = spec.relations->at(c.relation_index).arity();
    for (int i = 0; i < arity; ++i) {
      int var = static_cast<int>(
          bounded(rng, static_cast<std::uint64_t>(spec.var_count)));
      bool make_const = spec.const_prob > 0.0 && unit_real(rng) < spec.const_prob;
      if (make_const) {
        c.args.push_back(Arg::constant(bounded(rng, 2) == 1));
      } else {
        c.args.push_back(Arg::variable(var));
      }
    }
    clauses.push_back(std::move(c));
  }
  Formula f(spec.relations, VarOrder(std::move(names)), std::move(clauses));
  return Instance{spec.relations, std::move(f)};
}

std::shared_ptr<const RelationSet> preset(std::string_view name) {
  if (name == "impl") {
    return make_set({rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"}),
                     rel("UNIT1", 1, {"1"})});
  }
  if (name == "horn") {
    return make_set({rel("HORN3", 3,
                         {"000", "001", "010", "011", "100", "101", "111"}),
                     rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"}),
                     rel("UNIT1", 1, {"1"})});
  }
  if (name == "antihorn") {
    return make_set({rel("OR2", 2, {"01", "10", "11"}),
                     rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT1", 1, {"1"})});
  }
  if (name == "twocnf") {
    return make_set({rel("OR2", 2, {"01", "10", "11"}),
                     rel("NAND", 2, {"00", "01", "10"}),
                     rel("IMPL", 2, {"00", "01", "11"})});
  }
  if (name == "xor") {
    return make_set({rel("XOR", 2, {"01", "10"})});
  }
  if (name == "affine") {
    return make_set({rel("XOR3", 3, {"001", "010", "100", "111"}),
                     rel("XOR", 2, {"01", "10"})});
  }
  if (name == "r13") {
    return make_set({rel("R13", 3, {"001", "010", "100"})});
  }
  if (name == "rhs") {
    return make_set({rel("RHS", 3, {"010", "100", "111"})});
  }
  if (name == "r13eq") {
    return make_set({rel("R13", 3, {"001", "010", "100"}), rel("EQ", 2, {"00", "11"})});
  }
  if (name == "or3") {
    return make_set(
        {rel("OR3", 3, {"001", "010", "011", "100", "101", "110", "111"})});
  }
  if (name == "hard") {
    return make_set({rel("R13", 3, {"001", "010", "100"}),
                     rel("RHS", 3, {"010", "100", "111"})});
  }
  if (name == "mixed") {
    return make_set({rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"}),
                     rel("UNIT1", 1, {"1"}), rel("XOR", 2, {"01", "10"}),
                     rel("R13", 3, {"001", "010", "100"}),
                     rel("RHS", 3, {"010", "100", "111"})});
  }
  return nullptr;
}

std::vector<std::string> preset_names() {
  return {"impl", "horn", "antihorn", "twocnf", "xor",  "affine",
          "r13",  "rhs",  "r13eq",    "or3",    "hard", "mixed"};
}

}  // namespace lexsat
