#include <vector>

#include "doctest.h"
#include "lexsat/classify.hpp"
#include "lexsat/errors.hpp"
#include "support.hpp"

using namespace lexsat;
using testsup::rel;
using testsup::set_of;

namespace {

const std::vector<Property> kClosureProps = {Property::horn, Property::anti_horn,
                                             Property::bijunctive, Property::affine};

// All relations of the given arity, one per truth table.
std::vector<Relation> all_relations(int arity) {
  std::vector<Relation> out;
  Tuple limit = Tuple{1} << arity;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << limit); ++mask) {
    std::vector<Tuple> tuples;
    for (Tuple t = 0; t < limit; ++t) {
      if (mask & (std::uint64_t{1} << t)) tuples.push_back(t);
    }
    out.emplace_back("R" + std::to_string(mask), arity, std::move(tuples));
  }
  return out;
}

}  // namespace

TEST_CASE("single-relation property checks") {
  SUBCASE("hierarchical-SAT relation is one-valid only") {
    Relation r = rel("RHS", 3, {"100", "010", "111"});
    CHECK(has_property(r, Property::one_valid));
    CHECK(!has_property(r, Property::zero_valid));
    CHECK(!has_property(r, Property::horn));
    CHECK(!has_property(r, Property::anti_horn));
    CHECK(!has_property(r, Property::bijunctive));
    CHECK(!has_property(r, Property::affine));
  }

  SUBCASE("NAND is horn but not anti-horn") {
    Relation r = rel("NAND", 2, {"00", "01", "10"});
    CHECK(has_property(r, Property::horn));       // 01 AND 10 = 00, in R
    CHECK(!has_property(r, Property::anti_horn)); // 01 OR 10 = 11, not in R
  }

  SUBCASE("the full relation has every property") {
    Relation r = rel("FULL", 2, {"00", "01", "10", "11"});
    CHECK(has_property(r, Property::zero_valid));
    CHECK(has_property(r, Property::one_valid));
    for (Property p : kClosureProps) CHECK(has_property(r, p));
  }

  SUBCASE("the empty relation has the closure properties but neither validity") {
    Relation r("EMPTY", 2, {});
    CHECK(!has_property(r, Property::zero_valid));
    CHECK(!has_property(r, Property::one_valid));
    for (Property p : kClosureProps) CHECK(has_property(r, p));
  }
}

TEST_CASE("definitional oracle examples") {
  CHECK(definitional_oracle(rel("IMPL", 2, {"00", "01", "11"}), Property::horn));
  CHECK(!definitional_oracle(rel("R13", 3, {"100", "010", "001"}), Property::bijunctive));
  CHECK(definitional_oracle(rel("XOR", 2, {"01", "10"}), Property::affine));
  CHECK_THROWS_AS(definitional_oracle(rel("XOR", 2, {"01", "10"}), Property::zero_valid),
                  ContractError);
  CHECK_THROWS_AS(
      definitional_oracle(Relation("BIG", 5, {0, 31}), Property::affine),
      ResourceError);
}

TEST_CASE("closure checks agree with the definitional oracle for arity <= 3") {
  for (int arity = 1; arity <= 3; ++arity) {
    for (const Relation& r : all_relations(arity)) {
      for (Property p : kClosureProps) {
        CAPTURE(arity);
        CAPTURE(r.name());
        CHECK(has_property(r, p) == definitional_oracle(r, p));
      }
    }
  }
}

TEST_CASE("complement duality of the properties") {
  for (const Relation& r : all_relations(3)) {
    Relation c = r.bitwise_complement("C");
    CHECK(has_property(r, Property::horn) == has_property(c, Property::anti_horn));
    CHECK(has_property(r, Property::anti_horn) == has_property(c, Property::horn));
    CHECK(has_property(r, Property::zero_valid) == has_property(c, Property::one_valid));
    CHECK(has_property(r, Property::one_valid) == has_property(c, Property::zero_valid));
    CHECK(has_property(r, Property::bijunctive) == has_property(c, Property::bijunctive));
    CHECK(has_property(r, Property::affine) == has_property(c, Property::affine));
  }
}

TEST_CASE("closure properties are preserved by intersection") {
  auto relations = all_relations(2);
  for (const Relation& a : relations) {
    for (const Relation& b : relations) {
      std::vector<Tuple> common;
      for (Tuple t : a.tuples()) {
        if (b.contains(t)) common.push_back(t);
      }
      Relation meet("MEET", 2, std::move(common));
      for (Property p : kClosureProps) {
        if (has_property(a, p) && has_property(b, p)) {
          CAPTURE(a.name());
          CAPTURE(b.name());
          CHECK(has_property(meet, p));
        }
      }
    }
  }
}

TEST_CASE("classify_set combines per-relation flags and caches") {
  SUBCASE("horn preset") {
    auto s = set_of({rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"}),
                     rel("UNIT1", 1, {"1"})});
    Taxonomy t = classify_set(*s);
    CHECK(t.horn);
    CHECK(!t.affine);  // IMPL: 00 ^ 01 ^ 11 = 10, not in IMPL
    CHECK(s->cached_taxonomy().has_value());
    CHECK(classify_set(*s) == t);
  }

  SUBCASE("R13 has no flags at all") {
    auto s = set_of({rel("R13", 3, {"100", "010", "001"})});
    Taxonomy t = classify_set(*s);
    CHECK(t == Taxonomy{});
  }

  SUBCASE("a full relation has all flags") {
    auto s = set_of({rel("FULL", 2, {"00", "01", "10", "11"})});
    Taxonomy t = classify_set(*s);
    CHECK(t == Taxonomy{true, true, true, true, true, true});
  }
}

TEST_CASE("dispatch verdicts") {
  SUBCASE("hierarchical-SAT set: min hard, max poly without constants") {
    auto s = set_of({rel("RHS", 3, {"100", "010", "111"})});
    DispatchVerdict min_v = dispatch_verdict(*s, false, Direction::min);
    CHECK(!min_v.with_constants_poly);
    CHECK(!min_v.without_constants_poly);
    CHECK(min_v.reason == "none");
    DispatchVerdict max_v = dispatch_verdict(*s, false, Direction::max);
    CHECK(!max_v.with_constants_poly);
    CHECK(max_v.without_constants_poly);
    CHECK(max_v.reason == "one_valid");
  }

  SUBCASE("affine set is poly with constants") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    DispatchVerdict v = dispatch_verdict(*s, true, Direction::min);
    CHECK(v.with_constants_poly);
    CHECK(v.reason == "affine");
  }

  SUBCASE("with-constants poly implies without-constants poly") {
    for (const Relation& r : all_relations(2)) {
      auto s = set_of({r});
      for (Direction dir : {Direction::min, Direction::max}) {
        DispatchVerdict v = dispatch_verdict(*s, true, dir);
        if (v.with_constants_poly) {
          CHECK(dispatch_verdict(*s, false, dir).without_constants_poly);
        }
      }
    }
  }
}
