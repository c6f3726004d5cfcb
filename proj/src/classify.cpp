#include "lexsat/classify.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <vector>

#include "lexsat/errors.hpp"

namespace lexsat {

std::string_view property_name(Property p) {
  switch (p) {
    case Property::zero_valid: return "zero_valid";
    case Property::one_valid: return "one_valid";
    case Property::horn: return "horn";
    case Property::anti_horn: return "anti_horn";
    case Property::bijunctive: return "bijunctive";
    case Property::affine: return "affine";
  }
  return "?";
}

namespace {

bool closed_under_pairs(const Relation& r, bool use_and) {
  const auto& ts = r.tuples();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      Tuple combined = use_and ? (ts[i] & ts[j]) : (ts[i] | ts[j]);
      if (!r.contains(combined)) return false;
    }
  }
  return true;
}

bool closed_under_majority(const Relation& r) {
  const auto& ts = r.tuples();
  // maj with a repeated argument returns the repeated tuple, so only
  // pairwise-distinct triples can escape the relation.
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      for (std::size_t l = j + 1; l < ts.size(); ++l) {
        Tuple a = ts[i], b = ts[j], c = ts[l];
        Tuple maj = (a & b) | (a & c) | (b & c);
        if (!r.contains(maj)) return false;
      }
    }
  }
  return true;
}

// Closure under x ^ y ^ z is equivalent to being a coset of a GF(2)
// subspace, which the basis test decides in O(|R| * arity).
bool closed_under_ternary_xor(const Relation& r) {
  const auto& ts = r.tuples();
  if (ts.empty()) return true;
  Tuple origin = ts.front();
  std::array<Tuple, 32> pivot{};
  int rank = 0;
  for (Tuple t : ts) {
    Tuple v = t ^ origin;
    while (v) {
      int top = std::bit_width(v) - 1;
      if (pivot[top] == 0) {
        pivot[top] = v;
        ++rank;
        break;
      }
      v ^= pivot[top];
    }
  }
  // Every translated tuple lies in the span; the translate is a subspace
  // exactly when the sizes match.
  return ts.size() == (std::size_t{1} << rank);
}

}  // namespace

bool has_property(const Relation& r, Property p) {
  switch (p) {
    case Property::zero_valid:
      return r.contains(0);
    case Property::one_valid:
      return r.contains(r.full_tuple());
    case Property::horn:
      return closed_under_pairs(r, /*use_and=*/true);
    case Property::anti_horn:
      return closed_under_pairs(r, /*use_and=*/false);
    case Property::bijunctive:
      return closed_under_majority(r);
    case Property::affine:
      return closed_under_ternary_xor(r);
  }
  return false;
}

namespace {

// A candidate clause over relation coordinates: which coordinates occur and
// with which polarity (bit set = positive literal).
struct CandidateClause {
  Tuple coords;
  Tuple positives;
};

bool clause_satisfied(const CandidateClause& c, Tuple t) {
  // A literal holds when the tuple bit matches its polarity.
  return ((t & c.coords) ^ (~c.positives & c.coords)) != 0;
}

std::vector<CandidateClause> candidate_clauses(int k, Property p) {
  std::vector<CandidateClause> out;
  Tuple limit = Tuple{1} << k;
  for (Tuple coords = 1; coords < limit; ++coords) {
    int width = std::popcount(coords);
    if (p == Property::bijunctive && width > 2) continue;
    // Enumerate polarity patterns restricted to the chosen coordinates.
    for (Tuple pos = coords;; pos = (pos - 1) & coords) {
      int positives = std::popcount(pos);
      bool ok = true;
      if (p == Property::horn) ok = positives <= 1;
      if (p == Property::anti_horn) ok = (width - positives) <= 1;
      if (ok) out.push_back({coords, pos});
      if (pos == 0) break;
    }
  }
  return out;
}

bool oracle_cnf(const Relation& r, Property p) {
  int k = r.arity();
  std::vector<CandidateClause> kept;
  for (const CandidateClause& c : candidate_clauses(k, p)) {
    bool entailed = true;
    for (Tuple t : r.tuples()) {
      if (!clause_satisfied(c, t)) {
        entailed = false;
        break;
      }
    }
    if (entailed) kept.push_back(c);
  }
  Tuple limit = Tuple{1} << k;
  for (Tuple v = 0; v < limit; ++v) {
    bool sat = true;
    for (const CandidateClause& c : kept) {
      if (!clause_satisfied(c, v)) {
        sat = false;
        break;
      }
    }
    if (sat != r.contains(v)) return false;
  }
  return true;
}

bool oracle_affine(const Relation& r) {
  int k = r.arity();
  Tuple limit = Tuple{1} << k;
  // Entailed equations: coordinate subset plus right-hand side. The empty
  // subset with rhs 1 encodes inconsistency and is entailed only by the
  // empty relation.
  struct Eq {
    Tuple coords;
    bool rhs;
  };
  std::vector<Eq> kept;
  for (Tuple coords = 0; coords < limit; ++coords) {
    for (int rhs = 0; rhs <= 1; ++rhs) {
      if (coords == 0 && rhs == 0) continue;
      bool entailed = true;
      for (Tuple t : r.tuples()) {
        if ((std::popcount(t & coords) & 1) != rhs) {
          entailed = false;
          break;
        }
      }
      if (entailed) kept.push_back({coords, rhs != 0});
    }
  }
  for (Tuple v = 0; v < limit; ++v) {
    bool sat = true;
    for (const Eq& e : kept) {
      if ((std::popcount(v & e.coords) & 1) != (e.rhs ? 1 : 0)) {
        sat = false;
        break;
      }
    }
    if (sat != r.contains(v)) return false;
  }
  return true;
}

}  // namespace

bool definitional_oracle(const Relation& r, Property p) {
  if (p == Property::zero_valid || p == Property::one_valid) {
    throw ContractError("definitional_oracle covers only the closure properties");
  }
  if (r.arity() > kOracleArityBound) {
    throw ResourceError("definitional_oracle: arity " +
                        std::to_string(r.arity()) + " exceeds bound " +
                        std::to_string(kOracleArityBound));
  }
  if (p == Property::affine) return oracle_affine(r);
  return oracle_cnf(r, p);
}

Taxonomy classify_relation(const Relation& r) {
  Taxonomy t;
  t.zero_valid = has_property(r, Property::zero_valid);
  t.one_valid = has_property(r, Property::one_valid);
  t.horn = has_property(r, Property::horn);
  t.anti_horn = has_property(r, Property::anti_horn);
  t.bijunctive = has_property(r, Property::bijunctive);
  t.affine = has_property(r, Property::affine);
  return t;
}

Taxonomy classify_set(const RelationSet& s) {
  if (auto cached = s.cached_taxonomy()) return *cached;
  Taxonomy t{true, true, true, true, true, true};
  for (const Relation& r : s.relations()) {
    Taxonomy rt = classify_relation(r);
    t.zero_valid &= rt.zero_valid;
    t.one_valid &= rt.one_valid;
    t.horn &= rt.horn;
    t.anti_horn &= rt.anti_horn;
    t.bijunctive &= rt.bijunctive;
    t.affine &= rt.affine;
  }
  s.cache_taxonomy(t);
  return t;
}

DispatchVerdict dispatch_verdict(const RelationSet& s, bool allow_constants,
                                 Direction direction) {
  Taxonomy t = classify_set(s);
  DispatchVerdict v;
  v.with_constants_poly = t.any_closure_property();
  bool validity = direction == Direction::min ? t.zero_valid : t.one_valid;
  v.without_constants_poly = v.with_constants_poly || validity;

  bool poly = allow_constants ? v.with_constants_poly : v.without_constants_poly;
  if (!poly) {
    v.reason = "none";
  } else if (!allow_constants && validity) {
    // Validity short-circuits before the decision procedures in dispatch.
    v.reason = direction == Direction::min ? "zero_valid" : "one_valid";
  } else if (t.horn) {
    v.reason = "horn";
  } else if (t.anti_horn) {
    v.reason = "anti_horn";
  } else if (t.bijunctive) {
    v.reason = "bijunctive";
  } else {
    v.reason = "affine";
  }
  return v;
}

}  // namespace lexsat
