#include "lexsat/formula.hpp"

#include <algorithm>

#include "lexsat/errors.hpp"

namespace lexsat {

VarOrder::VarOrder(std::vector<std::string> names) : names_(std::move(names)) {
  position_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    auto [it, inserted] = position_.emplace(names_[i], static_cast<int>(i));
    if (!inserted) {
      throw ContractError("duplicate variable '" + names_[i] + "'");
    }
  }
}

int VarOrder::position(std::string_view name) const {
  auto it = position_.find(std::string(name));
  return it == position_.end() ? -1 : it->second;
}

Formula::Formula(std::shared_ptr<const RelationSet> relations, VarOrder vars,
                 std::vector<Clause> clauses)
    : relations_(std::move(relations)),
      vars_(std::move(vars)),
      clauses_(std::move(clauses)) {
  if (!relations_) throw ContractError("formula needs a relation set");
  for (const Clause& c : clauses_) {
    if (c.relation_index < 0 || c.relation_index >= relations_->size()) {
      throw ContractError("clause references an unknown relation");
    }
    const Relation& r = relations_->at(c.relation_index);
    if (static_cast<int>(c.args.size()) != r.arity()) {
      throw ContractError("clause on '" + r.name() + "': expected " +
                          std::to_string(r.arity()) + " arguments, got " +
                          std::to_string(c.args.size()));
    }
    for (const Arg& a : c.args) {
      if (a.is_var() && a.var() >= vars_.size()) {
        throw ContractError("clause on '" + r.name() +
                            "': variable index out of range");
      }
    }
  }
}

bool Formula::has_constant_args() const {
  for (const Clause& c : clauses_) {
    for (const Arg& a : c.args) {
      if (a.is_const()) return true;
    }
  }
  return false;
}

Formula Formula::reindexed(VarOrder new_vars) const {
  std::vector<Clause> remapped = clauses_;
  for (Clause& c : remapped) {
    for (Arg& a : c.args) {
      if (!a.is_var()) continue;
      int pos = new_vars.position(vars_.name(a.var()));
      if (pos < 0) {
        throw ContractError("reindex drops used variable '" +
                            vars_.name(a.var()) + "'");
      }
      a = Arg::variable(pos);
    }
  }
  return Formula(relations_, std::move(new_vars), std::move(remapped));
}

Assignment Assignment::from_uint(std::uint64_t value, int n) {
  if (n < 0 || n > 63) throw ContractError("packed assignment limited to 63 bits");
  std::vector<std::uint8_t> bits(n);
  for (int i = 0; i < n; ++i) {
    bits[i] = (value >> (n - 1 - i)) & 1u;
  }
  return Assignment(std::move(bits));
}

Assignment Assignment::from_string(std::string_view s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw ContractError("assignment string must consist of 0/1");
    }
    bits.push_back(c == '1');
  }
  return Assignment(std::move(bits));
}

std::string Assignment::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) s[i] = '1';
  }
  return s;
}

namespace {

// Reads one clause argument under an assignment accessor.
template <typename BitAt>
bool clause_holds(const Relation& r, const std::vector<Arg>& args, BitAt bit_at) {
  Tuple t = 0;
  int k = r.arity();
  for (int c = 0; c < k; ++c) {
    bool b = args[c].is_const() ? args[c].const_bit() : bit_at(args[c].var());
    t = (t << 1) | Tuple(b);
  }
  return r.contains(t);
}

}  // namespace

bool evaluate(const Formula& f, const Assignment& a) {
  if (a.size() != f.var_count()) {
    throw ContractError("assignment length " + std::to_string(a.size()) +
                        " does not match variable count " +
                        std::to_string(f.var_count()));
  }
  for (const Clause& c : f.clauses()) {
    if (!clause_holds(f.clause_relation(c), c.args,
                      [&](int v) { return a.bit(v); })) {
      return false;
    }
  }
  return true;
}

bool evaluate_packed(const Formula& f, std::uint64_t packed) {
  int n = f.var_count();
  for (const Clause& c : f.clauses()) {
    if (!clause_holds(f.clause_relation(c), c.args, [&](int v) {
          return ((packed >> (n - 1 - v)) & 1u) != 0;
        })) {
      return false;
    }
  }
  return true;
}

std::strong_ordering lex_compare(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) {
    throw ContractError("lex_compare needs equal lengths");
  }
  return std::lexicographical_compare_three_way(
      a.bits().begin(), a.bits().end(), b.bits().begin(), b.bits().end());
}

Formula substitute(const Formula& f, Arg from, Arg to, SubstMode mode) {
  if (from.is_var() && from.var() >= f.var_count()) {
    throw ContractError("substitute: source variable not declared");
  }
  if (to.is_var() && to.var() >= f.var_count()) {
    throw ContractError("substitute: target variable not declared");
  }
  std::vector<Clause> clauses = f.clauses();
  for (Clause& c : clauses) {
    for (Arg& a : c.args) {
      if (a == from) a = to;
    }
  }
  if (mode == SubstMode::keep_universe || !from.is_var() || from == to) {
    return Formula(f.relation_set_ptr(), f.vars(), std::move(clauses));
  }
  // Shrink: drop the fully replaced variable and remap indices above it.
  std::vector<std::string> names;
  names.reserve(f.var_count() - 1);
  for (int i = 0; i < f.var_count(); ++i) {
    if (i != from.var()) names.push_back(f.vars().name(i));
  }
  for (Clause& c : clauses) {
    for (Arg& a : c.args) {
      if (a.is_var() && a.var() > from.var()) a = Arg::variable(a.var() - 1);
    }
  }
  return Formula(f.relation_set_ptr(), VarOrder(std::move(names)),
                 std::move(clauses));
}

Relation relation_of(const Formula& f, int existential_suffix, std::string name,
                     int enumeration_bound) {
  int n = f.var_count();
  if (n > enumeration_bound) {
    throw ResourceError("relation_of: " + std::to_string(n) +
                        " variables exceed the enumeration bound " +
                        std::to_string(enumeration_bound));
  }
  if (existential_suffix < 0 || existential_suffix >= n) {
    throw ContractError("relation_of: existential suffix must leave at least one variable");
  }
  std::vector<Tuple> tuples;
  std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < limit; ++v) {
    if (evaluate_packed(f, v)) {
      // The suffix variables are the least significant bits.
      tuples.push_back(static_cast<Tuple>(v >> existential_suffix));
    }
  }
  return Relation(std::move(name), n - existential_suffix, std::move(tuples));
}

Assignment project(const VarOrder& vars, const Assignment& a,
                   std::span<const std::string> keep) {
  if (a.size() != vars.size()) {
    throw ContractError("project: assignment does not match the universe");
  }
  std::vector<int> positions;
  positions.reserve(keep.size());
  for (const std::string& name : keep) {
    int pos = vars.position(name);
    if (pos < 0) {
      throw ContractError("project: variable '" + name + "' not declared");
    }
    positions.push_back(pos);
  }
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()),
                  positions.end());
  std::vector<std::uint8_t> bits;
  bits.reserve(positions.size());
  for (int pos : positions) bits.push_back(a.bit(pos));
  return Assignment(std::move(bits));
}

}  // namespace lexsat
