#include "lexsat/compile.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <string>

#include "lexsat/errors.hpp"

namespace lexsat {

Property property_for_kind(CompiledKind kind) {
  switch (kind) {
    case CompiledKind::two_cnf: return Property::bijunctive;
    case CompiledKind::horn_cnf: return Property::horn;
    case CompiledKind::anti_horn_cnf: return Property::anti_horn;
    case CompiledKind::linear_system: return Property::affine;
  }
  return Property::affine;
}

std::optional<CnfClause> CnfClause::make(std::vector<Literal> literals) {
  std::sort(literals.begin(), literals.end());
  literals.erase(std::unique(literals.begin(), literals.end()), literals.end());
  for (std::size_t i = 1; i < literals.size(); ++i) {
    if (literals[i].var == literals[i - 1].var) return std::nullopt;  // tautology
  }
  return CnfClause(std::move(literals));
}

bool CnfClause::satisfied_by(const Assignment& a) const {
  for (const Literal& l : literals_) {
    if (a.bit(l.var) == l.positive) return true;
  }
  return false;
}

LinearEquation LinearEquation::make(std::vector<int> vars_with_repeats, bool rhs) {
  std::sort(vars_with_repeats.begin(), vars_with_repeats.end());
  std::vector<int> vars;
  for (std::size_t i = 0; i < vars_with_repeats.size();) {
    std::size_t j = i;
    while (j < vars_with_repeats.size() &&
           vars_with_repeats[j] == vars_with_repeats[i]) {
      ++j;
    }
    if ((j - i) % 2 == 1) vars.push_back(vars_with_repeats[i]);
    i = j;
  }
  return LinearEquation{std::move(vars), rhs};
}

bool LinearEquation::satisfied_by(const Assignment& a) const {
  bool parity = false;
  for (int v : vars) parity ^= a.bit(v);
  return parity == rhs;
}

bool CompiledForm::satisfied_by(const Assignment& a) const {
  if (kind == CompiledKind::linear_system) {
    for (const LinearEquation& e : equations) {
      if (!e.satisfied_by(a)) return false;
    }
    return true;
  }
  for (const CnfClause& c : clauses) {
    if (!c.satisfied_by(a)) return false;
  }
  return true;
}

namespace {

constexpr int kCompileVerifyBound = 12;

bool cnf_clause_holds_on_tuple(const CnfClause& c, Tuple t, int arity) {
  for (const Literal& l : c.literals()) {
    if (tuple_bit(t, l.var, arity) == l.positive) return true;
  }
  return false;
}

bool equation_holds_on_tuple(const LinearEquation& e, Tuple t, int arity) {
  bool parity = false;
  for (int v : e.vars) parity ^= tuple_bit(t, v, arity);
  return parity == e.rhs;
}

// All clauses of the kind's shape over k coordinates: nonempty coordinate
// subsets with per-coordinate polarities, filtered by the positive/negative
// literal budget (and width for 2-CNF).
std::vector<CnfClause> candidate_cnf(int k, CompiledKind kind) {
  std::vector<CnfClause> out;
  Tuple limit = Tuple{1} << k;
  for (Tuple coords = 1; coords < limit; ++coords) {
    int width = std::popcount(coords);
    if (kind == CompiledKind::two_cnf && width > 2) continue;
    for (Tuple pos = coords;; pos = (pos - 1) & coords) {
      int positives = std::popcount(pos);
      bool shape_ok = true;
      if (kind == CompiledKind::horn_cnf) shape_ok = positives <= 1;
      if (kind == CompiledKind::anti_horn_cnf) shape_ok = (width - positives) <= 1;
      if (shape_ok) {
        std::vector<Literal> lits;
        for (int c = 0; c < k; ++c) {
          if (coords & (Tuple{1} << c)) lits.push_back({c, (pos >> c & 1) != 0});
        }
        out.push_back(*CnfClause::make(std::move(lits)));
      }
      if (pos == 0) break;
    }
  }
  return out;
}

RelationCompilation build_compilation(const Relation& r, CompiledKind kind) {
  if (!has_property(r, property_for_kind(kind))) {
    throw PreconditionError(
        "relation '" + r.name() + "' is not " +
        std::string(property_name(property_for_kind(kind))) +
        "; the entailed conjunction would define a strict superset");
  }
  int k = r.arity();
  RelationCompilation out;
  if (kind == CompiledKind::linear_system) {
    Tuple limit = Tuple{1} << k;
    for (Tuple coords = 0; coords < limit; ++coords) {
      for (int rhs = 0; rhs <= 1; ++rhs) {
        if (coords == 0 && rhs == 0) continue;
        std::vector<int> vars;
        for (int c = 0; c < k; ++c) {
          if (coords & (Tuple{1} << c)) vars.push_back(c);
        }
        LinearEquation eq{std::move(vars), rhs != 0};
        bool entailed = std::all_of(
            r.tuples().begin(), r.tuples().end(),
            [&](Tuple t) { return equation_holds_on_tuple(eq, t, k); });
        if (entailed) out.equations.push_back(std::move(eq));
      }
    }
  } else {
    for (CnfClause& c : candidate_cnf(k, kind)) {
      bool entailed = std::all_of(
          r.tuples().begin(), r.tuples().end(),
          [&](Tuple t) { return cnf_clause_holds_on_tuple(c, t, k); });
      if (entailed) out.clauses.push_back(std::move(c));
    }
  }
  if (k <= kCompileVerifyBound) {
    // The property precheck guarantees exact definition; verify at small
    // arity anyway.
    Tuple limit = Tuple{1} << k;
    for (Tuple v = 0; v < limit; ++v) {
      bool sat = std::all_of(out.clauses.begin(), out.clauses.end(),
                             [&](const CnfClause& c) {
                               return cnf_clause_holds_on_tuple(c, v, k);
                             }) &&
                 std::all_of(out.equations.begin(), out.equations.end(),
                             [&](const LinearEquation& e) {
                               return equation_holds_on_tuple(e, v, k);
                             });
      if (sat != r.contains(v)) {
        throw std::logic_error("compile_relation verification failed for '" +
                               r.name() + "'");
      }
    }
  }
  return out;
}

struct CompileKey {
  int kind;
  int arity;
  std::vector<Tuple> tuples;

  friend auto operator<=>(const CompileKey&, const CompileKey&) = default;
};

// Keyed by table value so equal relations share one compilation and cached
// references never dangle.
const RelationCompilation& cached_compilation(const Relation& r, CompiledKind kind) {
  static std::mutex mutex;
  static std::map<CompileKey, RelationCompilation>* cache =
      new std::map<CompileKey, RelationCompilation>();
  CompileKey key{static_cast<int>(kind), r.arity(), r.tuples()};
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }
  RelationCompilation built = build_compilation(r, kind);
  std::lock_guard<std::mutex> lock(mutex);
  return cache->emplace(std::move(key), std::move(built)).first->second;
}

}  // namespace

const RelationCompilation& compile_relation(const Relation& r, CompiledKind kind) {
  return cached_compilation(r, kind);
}

CompiledForm compile_formula(const Formula& f, CompiledKind kind) {
  Taxonomy t = classify_set(f.relation_set());
  Property p = property_for_kind(kind);
  bool ok = p == Property::horn         ? t.horn
            : p == Property::anti_horn  ? t.anti_horn
            : p == Property::bijunctive ? t.bijunctive
                                        : t.affine;
  if (!ok) {
    throw PreconditionError("relation set is not " +
                            std::string(property_name(p)));
  }
  CompiledForm out;
  out.kind = kind;
  out.var_count = f.var_count();
  for (const Clause& clause : f.clauses()) {
    const RelationCompilation& rc =
        compile_relation(f.clause_relation(clause), kind);
    if (kind == CompiledKind::linear_system) {
      for (const LinearEquation& eq : rc.equations) {
        std::vector<int> vars;
        bool rhs = eq.rhs;
        for (int coord : eq.vars) {
          const Arg& a = clause.args[coord];
          if (a.is_const()) {
            rhs ^= a.const_bit();
          } else {
            vars.push_back(a.var());
          }
        }
        LinearEquation inst = LinearEquation::make(std::move(vars), rhs);
        if (!inst.trivial()) out.equations.push_back(std::move(inst));
      }
    } else {
      for (const CnfClause& c : rc.clauses) {
        std::vector<Literal> lits;
        bool satisfied = false;
        for (const Literal& l : c.literals()) {
          const Arg& a = clause.args[l.var];
          if (a.is_const()) {
            if (a.const_bit() == l.positive) {
              satisfied = true;
              break;
            }
            // Falsified literal: drop it.
          } else {
            lits.push_back({a.var(), l.positive});
          }
        }
        if (satisfied) continue;
        auto inst = CnfClause::make(std::move(lits));
        if (inst) out.clauses.push_back(std::move(*inst));
        // Tautology after merging: drop.
      }
    }
  }
  return out;
}

}  // namespace lexsat
