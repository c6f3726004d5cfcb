#include <algorithm>

#include "doctest.h"
#include "lexsat/compile.hpp"
#include "lexsat/errors.hpp"
#include "support.hpp"

using namespace lexsat;
using testsup::make_formula;
using testsup::rel;
using testsup::set_of;

namespace {

// Models of a compiled form by enumeration, packed like evaluate_packed.
std::vector<std::uint64_t> compiled_models(const CompiledForm& form) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << form.var_count); ++v) {
    Assignment a = Assignment::from_uint(v, form.var_count);
    if (form.satisfied_by(a)) out.push_back(v);
  }
  return out;
}

bool defines_exactly(const Relation& r, CompiledKind kind) {
  const RelationCompilation& rc = compile_relation(r, kind);
  int k = r.arity();
  for (Tuple v = 0; v < (Tuple{1} << k); ++v) {
    Assignment a = Assignment::from_uint(v, k);
    bool sat = std::all_of(rc.clauses.begin(), rc.clauses.end(),
                           [&](const CnfClause& c) { return c.satisfied_by(a); }) &&
               std::all_of(rc.equations.begin(), rc.equations.end(),
                           [&](const LinearEquation& e) { return e.satisfied_by(a); });
    if (sat != r.contains(v)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("clause and equation building blocks") {
  CHECK(!CnfClause::make({{0, true}, {0, false}}).has_value());  // tautology
  auto merged = CnfClause::make({{1, true}, {1, true}, {0, false}});
  REQUIRE(merged.has_value());
  CHECK(merged->literals().size() == 2);

  LinearEquation eq = LinearEquation::make({2, 0, 2, 1}, true);
  CHECK(eq.vars == std::vector<int>{0, 1});  // repeated pair cancels
  CHECK(LinearEquation::make({}, true).inconsistent());
  CHECK(LinearEquation::make({3, 3}, false).trivial());
}

TEST_CASE("compile_relation") {
  SUBCASE("IMPL as horn CNF contains the defining clause") {
    Relation impl = rel("IMPL", 2, {"00", "01", "11"});
    const RelationCompilation& rc = compile_relation(impl, CompiledKind::horn_cnf);
    auto want = CnfClause::make({{0, false}, {1, true}});
    CHECK(std::find(rc.clauses.begin(), rc.clauses.end(), *want) != rc.clauses.end());
    CHECK(defines_exactly(impl, CompiledKind::horn_cnf));
  }

  SUBCASE("XOR as a linear system") {
    Relation r = rel("XOR", 2, {"01", "10"});
    const RelationCompilation& rc = compile_relation(r, CompiledKind::linear_system);
    REQUIRE(rc.equations.size() == 1);
    CHECK(rc.equations[0] == LinearEquation{{0, 1}, true});
  }

  SUBCASE("unit relation as 2-CNF") {
    Relation r = rel("UNIT0", 1, {"0"});
    const RelationCompilation& rc = compile_relation(r, CompiledKind::two_cnf);
    REQUIRE(rc.clauses.size() == 1);
    CHECK(rc.clauses[0] == *CnfClause::make({{0, false}}));
  }

  SUBCASE("missing property is a precondition error") {
    CHECK_THROWS_AS(compile_relation(rel("OR3", 3,
                                         {"001", "010", "011", "100", "101", "110", "111"}),
                                     CompiledKind::horn_cnf),
                    PreconditionError);
    CHECK_THROWS_AS(compile_relation(rel("R13", 3, {"100", "010", "001"}),
                                     CompiledKind::linear_system),
                    PreconditionError);
  }

  SUBCASE("empty relation compiles to an unsatisfiable system") {
    Relation r("EMPTY", 2, {});
    const RelationCompilation& lin = compile_relation(r, CompiledKind::linear_system);
    CHECK(std::any_of(lin.equations.begin(), lin.equations.end(),
                      [](const LinearEquation& e) { return e.inconsistent(); }));
    CHECK(defines_exactly(r, CompiledKind::horn_cnf));
  }

  SUBCASE("every matching arity-2 relation is defined exactly") {
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      std::vector<Tuple> tuples;
      for (Tuple t = 0; t < 4; ++t) {
        if (mask & (std::uint64_t{1} << t)) tuples.push_back(t);
      }
      Relation r("M" + std::to_string(mask), 2, std::move(tuples));
      for (CompiledKind kind : {CompiledKind::two_cnf, CompiledKind::horn_cnf,
                                CompiledKind::anti_horn_cnf, CompiledKind::linear_system}) {
        if (!has_property(r, property_for_kind(kind))) continue;
        CHECK(defines_exactly(r, kind));
      }
    }
  }

  SUBCASE("adding a tuple never adds output clauses") {
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
      std::vector<Tuple> tuples;
      for (Tuple t = 0; t < 4; ++t) {
        if (mask & (std::uint64_t{1} << t)) tuples.push_back(t);
      }
      Relation r("M" + std::to_string(mask), 2, tuples);
      for (Tuple extra = 0; extra < 4; ++extra) {
        if (r.contains(extra)) continue;
        std::vector<Tuple> grown = tuples;
        grown.push_back(extra);
        Relation g("G", 2, std::move(grown));
        for (CompiledKind kind : {CompiledKind::two_cnf, CompiledKind::horn_cnf,
                                  CompiledKind::anti_horn_cnf, CompiledKind::linear_system}) {
          if (!has_property(r, property_for_kind(kind)) ||
              !has_property(g, property_for_kind(kind))) {
            continue;
          }
          const RelationCompilation& small = compile_relation(r, kind);
          const RelationCompilation& big = compile_relation(g, kind);
          for (const CnfClause& c : big.clauses) {
            CHECK(std::find(small.clauses.begin(), small.clauses.end(), c) !=
                  small.clauses.end());
          }
          for (const LinearEquation& e : big.equations) {
            CHECK(std::find(small.equations.begin(), small.equations.end(), e) !=
                  small.equations.end());
          }
        }
      }
    }
  }
}

TEST_CASE("compile_formula") {
  auto s = set_of({rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"}),
                   rel("XOR", 2, {"01", "10"})});

  SUBCASE("horn instantiation") {
    Formula f = make_formula(s, {"x1", "x2"},
                             {{"IMPL", {"x1", "x2"}}, {"UNIT0", {"x2"}}});
    CHECK_THROWS_AS(compile_formula(f, CompiledKind::horn_cnf), PreconditionError);
    // XOR in the catalog breaks the horn property; use a matching set.
    auto horn_set = set_of({rel("IMPL", 2, {"00", "01", "11"}), rel("UNIT0", 1, {"0"})});
    Formula g = make_formula(horn_set, {"x1", "x2"},
                             {{"IMPL", {"x1", "x2"}}, {"UNIT0", {"x2"}}});
    CompiledForm form = compile_formula(g, CompiledKind::horn_cnf);
    CHECK(std::find(form.clauses.begin(), form.clauses.end(),
                    *CnfClause::make({{0, false}, {1, true}})) != form.clauses.end());
    CHECK(std::find(form.clauses.begin(), form.clauses.end(),
                    *CnfClause::make({{1, false}})) != form.clauses.end());
    CHECK(compiled_models(form) == testsup::models_of(g));
  }

  SUBCASE("linear chain") {
    auto xor_set = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(xor_set, {"x1", "x2", "x3"},
                             {{"XOR", {"x1", "x2"}}, {"XOR", {"x2", "x3"}}});
    CompiledForm form = compile_formula(f, CompiledKind::linear_system);
    REQUIRE(form.equations.size() == 2);
    CHECK(form.equations[0] == LinearEquation{{0, 1}, true});
    CHECK(form.equations[1] == LinearEquation{{1, 2}, true});
  }

  SUBCASE("constants fold into the right-hand side") {
    auto xor_set = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(xor_set, {"x1"}, {{"XOR", {"x1", "1"}}});
    CompiledForm form = compile_formula(f, CompiledKind::linear_system);
    REQUIRE(form.equations.size() == 1);
    CHECK(form.equations[0] == LinearEquation{{0}, false});
    CHECK(compiled_models(form) == testsup::models_of(f));
  }

  SUBCASE("repeated variables merge and can empty a clause") {
    auto xor_set = set_of({rel("XOR", 2, {"01", "10"})});
    Formula f = make_formula(xor_set, {"x1"}, {{"XOR", {"x1", "x1"}}});
    CompiledForm form = compile_formula(f, CompiledKind::linear_system);
    REQUIRE(form.equations.size() == 1);
    CHECK(form.equations[0].inconsistent());
  }

  SUBCASE("compiled models equal relation_of on random matching instances") {
    struct Case {
      const char* preset;
      CompiledKind kind;
    };
    for (Case c : {Case{"impl", CompiledKind::horn_cnf},
                   Case{"antihorn", CompiledKind::anti_horn_cnf},
                   Case{"twocnf", CompiledKind::two_cnf},
                   Case{"affine", CompiledKind::linear_system}}) {
      for (int i = 0; i < 30; ++i) {
        GenSpec spec;
        spec.relations = preset(c.preset);
        spec.var_count = 1 + i % 10;
        spec.clause_count = 1 + (i * 3) % 12;
        spec.const_prob = (i % 2) ? 0.25 : 0.0;
        spec.seed = 9000 + i;
        Formula f = generate(spec).formula;
        CompiledForm form = compile_formula(f, c.kind);
        CHECK(compiled_models(form) == testsup::models_of(f));
      }
    }
  }

  SUBCASE("shape invariants hold for every output clause") {
    for (const char* name : {"impl", "antihorn", "twocnf", "affine"}) {
      GenSpec spec;
      spec.relations = preset(name);
      spec.var_count = 6;
      spec.clause_count = 10;
      spec.const_prob = 0.2;
      spec.seed = 77;
      Formula f = generate(spec).formula;
      Taxonomy t = classify_set(*spec.relations);
      if (t.horn) {
        for (const CnfClause& c : compile_formula(f, CompiledKind::horn_cnf).clauses) {
          int positives = 0;
          for (const Literal& l : c.literals()) positives += l.positive ? 1 : 0;
          CHECK(positives <= 1);
        }
      }
      if (t.anti_horn) {
        for (const CnfClause& c :
             compile_formula(f, CompiledKind::anti_horn_cnf).clauses) {
          int negatives = 0;
          for (const Literal& l : c.literals()) negatives += l.positive ? 0 : 1;
          CHECK(negatives <= 1);
        }
      }
      if (t.bijunctive) {
        for (const CnfClause& c : compile_formula(f, CompiledKind::two_cnf).clauses) {
          CHECK(c.literals().size() <= 2);
        }
      }
    }
  }
}
