#pragma once

#include <atomic>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexsat {

// One row of a relation's truth table. Coordinate i of a k-ary tuple lives in
// bit (k-1-i), so the integer value of a tuple equals its bitstring read as a
// binary number and numeric order coincides with lexicographic order.
using Tuple = std::uint32_t;

constexpr int kMaxArity = 31;

constexpr bool tuple_bit(Tuple t, int coord, int arity) {
  return (t >> (arity - 1 - coord)) & 1u;
}

constexpr Tuple with_tuple_bit(Tuple t, int coord, int arity, bool bit) {
  Tuple mask = Tuple{1} << (arity - 1 - coord);
  return bit ? (t | mask) : (t & ~mask);
}

// A boolean relation given extensionally by its truth table.
class Relation {
 public:
  Relation(std::string name, int arity, std::vector<Tuple> tuples);

  // Convenience constructor with tuples written as bitstrings ("01", "10").
  static Relation from_strings(std::string name, int arity,
                               std::initializer_list<const char*> tuples);

  const std::string& name() const { return name_; }
  int arity() const { return arity_; }
  // Sorted and deduplicated; may be empty (the unsatisfiable relation).
  const std::vector<Tuple>& tuples() const { return tuples_; }

  bool contains(Tuple t) const;
  bool empty() const { return tuples_.empty(); }
  Tuple full_tuple() const { return (Tuple{1} << arity_) - 1; }
  std::string tuple_string(Tuple t) const;

  // Same table, every bit of every tuple flipped.
  Relation bitwise_complement(std::string name) const;
  // Tuples with the given coordinate fixed to `bit`, that coordinate removed.
  Relation restricted(int coord, bool bit, std::string name) const;

  // Table equality irrespective of the name.
  bool same_table(const Relation& other) const {
    return arity_ == other.arity_ && tuples_ == other.tuples_;
  }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::string name_;
  int arity_;
  std::vector<Tuple> tuples_;
};

// The six taxonomy flags of a relation or relation set.
struct Taxonomy {
  bool zero_valid = false;
  bool one_valid = false;
  bool horn = false;
  bool anti_horn = false;
  bool bijunctive = false;
  bool affine = false;

  bool any_closure_property() const {
    return horn || anti_horn || bijunctive || affine;
  }

  std::uint16_t pack() const;
  static Taxonomy unpack(std::uint16_t bits);

  friend bool operator==(const Taxonomy&, const Taxonomy&) = default;
};

// An ordered catalog of relations with unique names. Immutable after
// construction except for the idempotent taxonomy cache.
class RelationSet {
 public:
  explicit RelationSet(std::vector<Relation> relations);

  RelationSet(const RelationSet& other)
      : relations_(other.relations_), cache_(other.cache_.load()) {}
  RelationSet& operator=(const RelationSet& other) {
    relations_ = other.relations_;
    cache_.store(other.cache_.load());
    return *this;
  }

  const std::vector<Relation>& relations() const { return relations_; }
  int size() const { return static_cast<int>(relations_.size()); }
  const Relation& at(int index) const { return relations_[index]; }
  int index_of(std::string_view name) const;  // -1 if absent
  const Relation* find(std::string_view name) const;

  std::optional<Taxonomy> cached_taxonomy() const;
  void cache_taxonomy(const Taxonomy& t) const;

  friend bool operator==(const RelationSet& a, const RelationSet& b) {
    return a.relations_ == b.relations_;
  }

 private:
  std::vector<Relation> relations_;
  // 0 = unset, otherwise 0x100 | packed flags. Recomputation always yields
  // the same value, so a plain atomic store is race-benign.
  mutable std::atomic<std::uint16_t> cache_{0};
};

}  // namespace lexsat
