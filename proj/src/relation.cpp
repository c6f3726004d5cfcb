#include "lexsat/relation.hpp"

#include <algorithm>
#include <cstring>

#include "lexsat/errors.hpp"

namespace lexsat {

Relation::Relation(std::string name, int arity, std::vector<Tuple> tuples)
    : name_(std::move(name)), arity_(arity), tuples_(std::move(tuples)) {
  if (arity_ < 1 || arity_ > kMaxArity) {
    throw ContractError("relation '" + name_ + "': arity must be in [1, " +
                        std::to_string(kMaxArity) + "]");
  }
  Tuple limit = Tuple{1} << arity_;
  for (Tuple t : tuples_) {
    if (t >= limit) {
      throw ContractError("relation '" + name_ + "': tuple exceeds arity " +
                          std::to_string(arity_));
    }
  }
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

Relation Relation::from_strings(std::string name, int arity,
                                std::initializer_list<const char*> tuples) {
  std::vector<Tuple> parsed;
  parsed.reserve(tuples.size());
  for (const char* s : tuples) {
    if (static_cast<int>(std::strlen(s)) != arity) {
      throw ContractError("relation '" + name + "': tuple '" + s +
                          "' does not match arity " + std::to_string(arity));
    }
    Tuple t = 0;
    for (int i = 0; i < arity; ++i) {
      if (s[i] != '0' && s[i] != '1') {
        throw ContractError("relation '" + name + "': tuple '" + s +
                            "' contains a character other than 0/1");
      }
      t = (t << 1) | Tuple(s[i] == '1');
    }
    parsed.push_back(t);
  }
  return Relation(std::move(name), arity, std::move(parsed));
}

bool Relation::contains(Tuple t) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), t);
}

std::string Relation::tuple_string(Tuple t) const {
  std::string s(arity_, '0');
  for (int i = 0; i < arity_; ++i) {
    if (tuple_bit(t, i, arity_)) s[i] = '1';
  }
  return s;
}

Relation Relation::bitwise_complement(std::string name) const {
  std::vector<Tuple> flipped;
  flipped.reserve(tuples_.size());
  Tuple mask = full_tuple();
  for (Tuple t : tuples_) flipped.push_back(t ^ mask);
  return Relation(std::move(name), arity_, std::move(flipped));
}

Relation Relation::restricted(int coord, bool bit, std::string name) const {
  if (coord < 0 || coord >= arity_) {
    throw ContractError("relation '" + name_ + "': restriction coordinate out of range");
  }
  if (arity_ == 1) {
    throw ContractError("relation '" + name_ + "': cannot restrict a unary relation");
  }
  std::vector<Tuple> kept;
  int shift = arity_ - 1 - coord;
  Tuple low_mask = (Tuple{1} << shift) - 1;
  for (Tuple t : tuples_) {
    if (tuple_bit(t, coord, arity_) != bit) continue;
    // Drop the coordinate: splice the bits around it.
    Tuple high = t >> (shift + 1);
    kept.push_back((high << shift) | (t & low_mask));
  }
  return Relation(std::move(name), arity_ - 1, std::move(kept));
}

std::uint16_t Taxonomy::pack() const {
  std::uint16_t bits = 0;
  bits |= zero_valid ? 1 : 0;
  bits |= one_valid ? 2 : 0;
  bits |= horn ? 4 : 0;
  bits |= anti_horn ? 8 : 0;
  bits |= bijunctive ? 16 : 0;
  bits |= affine ? 32 : 0;
  return bits;
}

Taxonomy Taxonomy::unpack(std::uint16_t bits) {
  Taxonomy t;
  t.zero_valid = bits & 1;
  t.one_valid = bits & 2;
  t.horn = bits & 4;
  t.anti_horn = bits & 8;
  t.bijunctive = bits & 16;
  t.affine = bits & 32;
  return t;
}

RelationSet::RelationSet(std::vector<Relation> relations)
    : relations_(std::move(relations)) {
  if (relations_.empty()) {
    throw ContractError("relation set must be nonempty");
  }
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    for (std::size_t j = i + 1; j < relations_.size(); ++j) {
      if (relations_[i].name() == relations_[j].name()) {
        throw ContractError("duplicate relation name '" + relations_[i].name() + "'");
      }
    }
  }
}

int RelationSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name() == name) return static_cast<int>(i);
  }
  return -1;
}

const Relation* RelationSet::find(std::string_view name) const {
  int i = index_of(name);
  return i < 0 ? nullptr : &relations_[i];
}

std::optional<Taxonomy> RelationSet::cached_taxonomy() const {
  std::uint16_t bits = cache_.load(std::memory_order_relaxed);
  if (!(bits & 0x100)) return std::nullopt;
  return Taxonomy::unpack(bits & 0xff);
}

void RelationSet::cache_taxonomy(const Taxonomy& t) const {
  cache_.store(static_cast<std::uint16_t>(0x100 | t.pack()),
               std::memory_order_relaxed);
}

}  // namespace lexsat
