#include <algorithm>

#include "doctest.h"
#include "lexsat/errors.hpp"
#include "lexsat/solve.hpp"
#include "support.hpp"

using namespace lexsat;
using testsup::make_formula;
using testsup::rel;
using testsup::set_of;

namespace {

const std::vector<Method> kAllMethods = {Method::two_cnf, Method::horn,
                                         Method::anti_horn, Method::affine,
                                         Method::generic};

Method applicable_method(const Formula& f) {
  return method_for(classify_set(f.relation_set()));
}

}  // namespace

TEST_CASE("decide_sat") {
  SUBCASE("horn example") {
    auto s = set_of({rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"})});
    Formula f = make_formula(s, {"x1", "x2"},
                             {{"IMPL", {"x1", "x2"}}, {"UNIT0", {"x2"}}});
    CHECK(decide_sat(f, {}, Method::horn));
  }

  SUBCASE("affine contradiction") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"x1"}, {{"XOR", {"x1", "x1"}}});
    CHECK(!decide_sat(f, {}, Method::affine));
    CHECK(!decide_sat(f, {}, Method::generic));
  }

  SUBCASE("affine chain under a fix") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"x1", "x2", "x3"},
                             {{"XOR", {"x1", "x2"}}, {"XOR", {"x2", "x3"}}});
    PartialFix fix;
    fix.set(0, false);
    CHECK(decide_sat(f, fix, Method::affine));
    PartialFix contradictory;
    contradictory.set(0, false);
    contradictory.set(1, false);
    CHECK(!decide_sat(f, contradictory, Method::affine));
  }

  SUBCASE("method without the property is a precondition error") {
    auto s = set_of({rel("R13", 3, {"100", "010", "001"})});
    Formula f = make_formula(s, {"a", "b", "c"}, {{"R13", {"a", "b", "c"}}});
    CHECK_THROWS_AS(decide_sat(f, {}, Method::horn), PreconditionError);
    CHECK(decide_sat(f, {}, Method::generic));
  }

  SUBCASE("fix outside the universe is rejected") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"x1", "x2"}, {{"XOR", {"x1", "x2"}}});
    PartialFix fix;
    fix.set(5, true);
    CHECK_THROWS_AS(decide_sat(f, fix, Method::generic), ContractError);
  }
}

TEST_CASE("lex_opt worked examples") {
  SUBCASE("R13 via the generic path") {
    auto s = set_of({rel("R13", 3, {"100", "010", "001"})});
    Formula f = make_formula(s, {"x1", "x2", "x3"}, {{"R13", {"x1", "x2", "x3"}}});
    SolveResult mn = lex_opt(f, Direction::min, Method::generic);
    CHECK(mn.assignment->to_string() == "001");
    CHECK(mn.stats.decision_calls == 4);
    SolveResult mx = lex_opt(f, Direction::max, Method::generic);
    CHECK(mx.assignment->to_string() == "100");
  }

  SUBCASE("hierarchical-SAT relation") {
    auto s = set_of({rel("RHS", 3, {"100", "010", "111"})});
    Formula f = make_formula(s, {"x1", "x2", "x3"}, {{"RHS", {"x1", "x2", "x3"}}});
    CHECK(lex_opt(f, Direction::min, Method::generic).assignment->to_string() == "010");
  }

  SUBCASE("contradiction is unsat with one decision call") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"x1"}, {{"XOR", {"x1", "x1"}}});
    for (Method m : {Method::affine, Method::generic}) {
      for (Direction d : {Direction::min, Direction::max}) {
        SolveResult r = lex_opt(f, d, m);
        CHECK(!r.sat());
        CHECK(r.stats.decision_calls == 1);
      }
    }
  }

  SUBCASE("empty conjunction") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"a", "b", "c"}, {});
    CHECK(lex_opt(f, Direction::min, Method::affine).assignment->to_string() == "000");
    CHECK(lex_opt(f, Direction::max, Method::affine).assignment->to_string() == "111");
  }

  SUBCASE("affine chain") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"x1", "x2", "x3"},
                             {{"XOR", {"x1", "x2"}}, {"XOR", {"x2", "x3"}}});
    SolveResult r = lex_opt(f, Direction::min, Method::affine);
    CHECK(r.assignment->to_string() == "010");
    CHECK(r.stats.decision_calls == 4);
  }
}

TEST_CASE("brute force oracle") {
  auto s = set_of({rel("R13", 3, {"100", "010", "001"})});
  Formula f = make_formula(s, {"x1", "x2", "x3"}, {{"R13", {"x1", "x2", "x3"}}});
  CHECK(brute_force_lex_opt(f, Direction::min).assignment->to_string() == "001");
  CHECK(brute_force_lex_opt(f, Direction::max).assignment->to_string() == "100");

  Formula empty = make_formula(s, {"a", "b"}, {});
  CHECK(brute_force_lex_opt(empty, Direction::max).assignment->to_string() == "11");

  std::vector<std::string> names;
  for (int i = 0; i <= kBruteForceBound; ++i) names.push_back("v" + std::to_string(i));
  Formula big = make_formula(s, names, {});
  CHECK_THROWS_AS(brute_force_lex_opt(big, Direction::min), ResourceError);
}

TEST_CASE("dispatch") {
  SUBCASE("zero-valid shortcut answers without decision calls") {
    auto s = set_of({rel("IMPL", 2, {"00", "01", "11"})});
    Formula f = make_formula(s, {"x1", "x2"}, {{"IMPL", {"x1", "x2"}}});
    SolveResult r = dispatch(f, false, Direction::min, Fallback::forbid);
    CHECK(r.assignment->to_string() == "00");
    CHECK(r.stats.decision_calls == 0);
    CHECK(r.method == "zero_valid");
    // With constants allowed the shortcut does not apply; IMPL is horn.
    SolveResult rc = dispatch(f, true, Direction::min, Fallback::forbid);
    CHECK(rc.method == "horn");
    CHECK(rc.assignment->to_string() == "00");
  }

  SUBCASE("hard set falls back to the generic path") {
    auto s = set_of({rel("RHS", 3, {"100", "010", "111"})});
    Formula f = make_formula(s, {"x1", "x2", "x3"}, {{"RHS", {"x1", "x2", "x3"}}});
    SolveResult r = dispatch(f, false, Direction::min, Fallback::allow);
    CHECK(r.method == "generic");
    CHECK(r.assignment->to_string() == "010");
    CHECK_THROWS_AS(dispatch(f, false, Direction::min, Fallback::forbid),
                    DispatchError);
    // The max direction rides the one-valid shortcut instead.
    SolveResult mx = dispatch(f, false, Direction::max, Fallback::forbid);
    CHECK(mx.method == "one_valid");
    CHECK(mx.assignment->to_string() == "111");
  }

  SUBCASE("affine set routes to the linear solver") {
    auto s = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(s, {"x1", "x2", "x3"},
                             {{"XOR", {"x1", "x2"}}, {"XOR", {"x2", "x3"}}});
    SolveResult r = dispatch(f, false, Direction::min, Fallback::forbid);
    CHECK(r.method == "affine");
    CHECK(r.assignment->to_string() == "010");
  }

  SUBCASE("constant arguments disable the validity shortcut") {
    auto s = set_of({rel("RHS", 3, {"100", "010", "111"})});
    Formula f = make_formula(s, {"x1", "x2"}, {{"RHS", {"x1", "x2", "0"}}});
    SolveResult r = dispatch(f, false, Direction::max, Fallback::allow);
    CHECK(r.method == "generic");
    CHECK(r.assignment->to_string() == "10");
  }
}

TEST_CASE("dispatch equals brute force on a mixed battery") {
  for (int idx = 0; idx < 240; ++idx) {
    lexsat::Instance inst = testsup::battery_instance(idx, 10, 14);
    const Formula& f = inst.formula;
    bool allow_constants = f.has_constant_args();
    for (Direction dir : {Direction::min, Direction::max}) {
      SolveResult fast = dispatch(f, allow_constants, dir, Fallback::allow);
      SolveResult slow = brute_force_lex_opt(f, dir);
      CAPTURE(idx);
      CHECK(fast.sat() == slow.sat());
      if (fast.sat()) {
        CHECK(fast.assignment->to_string() == slow.assignment->to_string());
        // Greedy loop accounting: one initial call plus one per variable,
        // except for the validity shortcut which answers immediately.
        if (fast.method == "zero_valid" || fast.method == "one_valid") {
          CHECK(fast.stats.decision_calls == 0);
        } else {
          CHECK(fast.stats.decision_calls == f.var_count() + 1);
        }
      } else {
        CHECK(fast.stats.decision_calls == 1);
      }
    }
  }
}

TEST_CASE("every method agrees with brute force where it applies") {
  for (int idx = 0; idx < 120; ++idx) {
    lexsat::Instance inst = testsup::battery_instance(idx, 8, 10, 4242);
    const Formula& f = inst.formula;
    Taxonomy t = classify_set(f.relation_set());
    SolveResult slow = brute_force_lex_opt(f, Direction::min);
    for (Method m : kAllMethods) {
      bool applies = m == Method::generic ||
                     (m == Method::horn && t.horn) ||
                     (m == Method::anti_horn && t.anti_horn) ||
                     (m == Method::two_cnf && t.bijunctive) ||
                     (m == Method::affine && t.affine);
      if (!applies) continue;
      SolveResult fast = lex_opt(f, Direction::min, m);
      CAPTURE(idx);
      CAPTURE(method_name(m));
      CHECK(fast.sat() == slow.sat());
      if (fast.sat()) {
        CHECK(fast.assignment->to_string() == slow.assignment->to_string());
      }
    }
  }
}

TEST_CASE("restriction preserves the closure properties") {
  for (const char* name : {"impl", "twocnf", "antihorn", "affine", "horn"}) {
    auto s = preset(name);
    Taxonomy t = classify_set(*s);
    for (const Relation& r : s->relations()) {
      if (r.arity() < 2) continue;
      for (int coord = 0; coord < r.arity(); ++coord) {
        for (int bit = 0; bit <= 1; ++bit) {
          Relation restricted = r.restricted(coord, bit == 1, "restricted");
          if (t.horn) CHECK(has_property(restricted, Property::horn));
          if (t.anti_horn) CHECK(has_property(restricted, Property::anti_horn));
          if (t.bijunctive) CHECK(has_property(restricted, Property::bijunctive));
          if (t.affine) CHECK(has_property(restricted, Property::affine));
        }
      }
    }
  }
}

TEST_CASE("minimality certificate: no smaller prefix is satisfiable") {
  for (int idx = 0; idx < 60; ++idx) {
    lexsat::Instance inst = testsup::battery_instance(idx, 8, 10, 31337);
    const Formula& f = inst.formula;
    SolveResult r = dispatch(f, f.has_constant_args(), Direction::min, Fallback::allow);
    if (!r.sat()) continue;
    const Assignment& a = *r.assignment;
    for (int i = 0; i < f.var_count(); ++i) {
      if (!a.bit(i)) continue;
      PartialFix fix;
      for (int j = 0; j < i; ++j) fix.set(j, a.bit(j));
      fix.set(i, false);
      CHECK(!decide_sat(f, fix, Method::generic));
    }
  }
}

TEST_CASE("max duality via coordinate complement") {
  for (int idx = 0; idx < 80; ++idx) {
    lexsat::Instance inst = testsup::battery_instance(idx, 8, 10, 90210);
    const Formula& f = inst.formula;
    Formula c = testsup::complement_formula(f);
    SolveResult mx = dispatch(f, f.has_constant_args(), Direction::max, Fallback::allow);
    SolveResult mn = dispatch(c, c.has_constant_args(), Direction::min, Fallback::allow);
    CHECK(mx.sat() == mn.sat());
    if (mx.sat()) {
      std::string flipped = mn.assignment->to_string();
      for (char& ch : flipped) ch = ch == '0' ? '1' : '0';
      CHECK(mx.assignment->to_string() == flipped);
    }
  }
}

TEST_CASE("sat_nontrivial") {
  SUBCASE("worked examples") {
    auto s13 = set_of({rel("R13", 3, {"100", "010", "001"})});
    CHECK(sat_nontrivial(make_formula(s13, {"a", "b", "c"}, {{"R13", {"a", "b", "c"}}})));
    auto shs = set_of({rel("RHS", 3, {"100", "010", "111"})});
    CHECK(sat_nontrivial(make_formula(shs, {"a", "b", "c"}, {{"RHS", {"a", "b", "c"}}})));
    auto sand = set_of({rel("AND3", 3, {"111"})});
    CHECK(!sat_nontrivial(make_formula(sand, {"a", "b", "c"}, {{"AND3", {"a", "b", "c"}}})));
  }

  SUBCASE("single-variable formulas never qualify") {
    auto s = set_of({rel("UNIT1", 1, {"1"})});
    CHECK(!sat_nontrivial(make_formula(s, {"a"}, {{"UNIT1", {"a"}}})));
  }

  SUBCASE("agrees with enumeration on the battery") {
    for (int idx = 0; idx < 60; ++idx) {
      lexsat::Instance inst = testsup::battery_instance(idx, 7, 8, 555);
      const Formula& f = inst.formula;
      bool expected = false;
      std::uint64_t all_ones = (std::uint64_t{1} << f.var_count()) - 1;
      for (std::uint64_t m : testsup::models_of(f)) {
        if (m != 0 && m != all_ones) expected = true;
      }
      CHECK(sat_nontrivial(f) == expected);
    }
  }
}

TEST_CASE("odd_opt") {
  auto s13 = set_of({rel("R13", 3, {"100", "010", "001"})});
  Formula f13 = make_formula(s13, {"a", "b", "c"}, {{"R13", {"a", "b", "c"}}});
  CHECK(odd_opt(f13, Direction::min, false));  // minimal model 001

  auto shs = set_of({rel("RHS", 3, {"100", "010", "111"})});
  Formula fhs = make_formula(shs, {"a", "b", "c"}, {{"RHS", {"a", "b", "c"}}});
  CHECK(!odd_opt(fhs, Direction::min, false));  // minimal model 010

  auto sx = set_of({rel("XOR", 2, {"01", "10"})});
  Formula contradiction = make_formula(sx, {"a"}, {{"XOR", {"a", "a"}}});
  CHECK(!odd_opt(contradiction, Direction::min, false));  // unsat convention

  SUBCASE("definitional agreement with dispatch") {
    for (int idx = 0; idx < 60; ++idx) {
      lexsat::Instance inst = testsup::battery_instance(idx, 8, 10, 777);
      const Formula& f = inst.formula;
      if (f.var_count() == 0) continue;
      SolveResult r = dispatch(f, f.has_constant_args(), Direction::min, Fallback::allow);
      bool expected = r.sat() && r.assignment->bit(f.var_count() - 1);
      CHECK(odd_opt(f, Direction::min, f.has_constant_args()) == expected);
    }
  }
}

TEST_CASE("solve results carry evaluated models") {
  for (int idx = 0; idx < 40; ++idx) {
    lexsat::Instance inst = testsup::battery_instance(idx, 9, 12, 2024);
    const Formula& f = inst.formula;
    SolveResult r = dispatch(f, f.has_constant_args(), Direction::min, Fallback::allow);
    if (r.sat()) {
      CHECK(evaluate(f, *r.assignment));
      CHECK(r.assignment->size() == f.var_count());
    }
    Method m = applicable_method(f);
    CHECK((m == Method::generic ||
           decide_sat(f, {}, m) == r.sat()));
  }
}
