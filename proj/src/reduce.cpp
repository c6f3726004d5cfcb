#include "lexsat/reduce.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "lexsat/classify.hpp"
#include "lexsat/errors.hpp"

namespace lexsat {

Assignment ReductionOutput::project_kept(const Assignment& a) const {
  return project(formula.vars(), a, kept);
}

SolveResult ReductionOutput::decode(const SolveResult& r) const {
  SolveResult out;
  out.method = r.method;
  out.stats = r.stats;
  out.status = Status::unsat;
  if (!r.sat()) return out;
  for (auto [pos, bit] : forced) {
    if (r.assignment->bit(pos) != bit) return out;
  }
  out.status = Status::sat;
  out.assignment = project_kept(*r.assignment);
  return out;
}

namespace {

// Argument codes for the gadget search: target coordinates first, then the
// auxiliary variables, then (when allowed) the two constants. Coordinates
// and auxiliaries are their own universe positions.
struct SearchSpace {
  int k;
  int max_aux;
  bool constants;

  int arg_count() const { return k + max_aux + (constants ? 2 : 0); }
  bool is_const(int code) const { return code >= k + max_aux; }
  bool const_bit(int code) const { return code == k + max_aux + 1; }
  bool is_aux(int code) const { return code >= k && code < k + max_aux; }
};

struct SearchClause {
  int relation;
  std::array<int, 16> args;
  int arity;
};

// Decodes clause id -> (relation, argument pattern) against the block
// layout: relation blocks in set order, patterns as base-N numbers with the
// first argument most significant.
SearchClause decode_clause(const RelationSet& s, const SearchSpace& space,
                           std::int64_t id, const std::vector<std::int64_t>& block_start) {
  int rel = static_cast<int>(
      std::upper_bound(block_start.begin(), block_start.end(), id) -
      block_start.begin() - 1);
  std::int64_t offset = id - block_start[rel];
  SearchClause c;
  c.relation = rel;
  c.arity = s.at(rel).arity();
  int base = space.arg_count();
  for (int i = c.arity - 1; i >= 0; --i) {
    c.args[i] = static_cast<int>(offset % base);
    offset /= base;
  }
  return c;
}

// Auxiliaries must appear in first-use order so permuted duplicates are
// enumerated once.
bool canonical_aux_usage(const std::vector<SearchClause>& clauses,
                         const SearchSpace& space, int* aux_used) {
  int highest = space.k - 1;
  for (const SearchClause& c : clauses) {
    for (int i = 0; i < c.arity; ++i) {
      int code = c.args[i];
      if (!space.is_aux(code)) continue;
      if (code > highest + 1) return false;
      highest = std::max(highest, code);
    }
  }
  *aux_used = highest - space.k + 1;
  return true;
}

// Checks that the candidate's satisfying assignments, projected off the
// auxiliary suffix, are exactly the target tuples.
bool verify_candidate(const RelationSet& s, const SearchSpace& space,
                      const std::vector<SearchClause>& clauses, int aux_used,
                      const Relation& target) {
  int nv = space.k + aux_used;
  Tuple limit = Tuple{1} << nv;
  std::vector<Tuple> projected;
  for (Tuple v = 0; v < limit; ++v) {
    bool sat = true;
    for (const SearchClause& c : clauses) {
      const Relation& r = s.at(c.relation);
      Tuple t = 0;
      for (int i = 0; i < c.arity; ++i) {
        int code = c.args[i];
        bool bit = space.is_const(code) ? space.const_bit(code)
                                        : tuple_bit(v, code, nv);
        t = (t << 1) | Tuple(bit);
      }
      if (!r.contains(t)) {
        sat = false;
        break;
      }
    }
    if (sat) projected.push_back(v >> aux_used);
  }
  std::sort(projected.begin(), projected.end());
  projected.erase(std::unique(projected.begin(), projected.end()),
                  projected.end());
  return projected == target.tuples();
}

Implementation build_implementation(const std::shared_ptr<const RelationSet>& s,
                                    const SearchSpace& space,
                                    const std::vector<SearchClause>& clauses,
                                    int aux_used, const Relation& target) {
  std::vector<std::string> names;
  for (int i = 0; i < space.k; ++i) names.push_back("x" + std::to_string(i + 1));
  for (int j = 0; j < aux_used; ++j) names.push_back("y" + std::to_string(j + 1));
  std::vector<Clause> out;
  for (const SearchClause& c : clauses) {
    Clause cl;
    cl.relation_index = c.relation;
    for (int i = 0; i < c.arity; ++i) {
      int code = c.args[i];
      if (space.is_const(code)) {
        cl.args.push_back(Arg::constant(space.const_bit(code)));
      } else {
        cl.args.push_back(Arg::variable(code));
      }
    }
    out.push_back(std::move(cl));
  }
  return Implementation{target,
                        Formula(s, VarOrder(std::move(names)), std::move(out)),
                        aux_used};
}

// Per-clause precomputation for the fast search path: the clause's
// satisfying assignments over the full (coordinates + all auxiliaries)
// universe as a bitmask, plus its auxiliary codes in first-use order.
struct ClauseInfo {
  std::uint64_t sat_mask;
  std::array<std::int8_t, 8> aux_order;
  int aux_count;
};

ClauseInfo clause_info(const RelationSet& s, const SearchSpace& space,
                       const SearchClause& c, int universe_bits) {
  ClauseInfo info{};
  info.aux_count = 0;
  bool seen[16] = {};
  for (int i = 0; i < c.arity; ++i) {
    int code = c.args[i];
    if (space.is_aux(code) && !seen[code - space.k]) {
      seen[code - space.k] = true;
      info.aux_order[info.aux_count++] = static_cast<std::int8_t>(code - space.k);
    }
  }
  const Relation& r = s.at(c.relation);
  std::uint64_t limit = std::uint64_t{1} << universe_bits;
  for (std::uint64_t v = 0; v < limit; ++v) {
    Tuple t = 0;
    for (int i = 0; i < c.arity; ++i) {
      int code = c.args[i];
      bool bit = space.is_const(code) ? space.const_bit(code)
                                      : tuple_bit(static_cast<Tuple>(v), code,
                                                  universe_bits);
      t = (t << 1) | Tuple(bit);
    }
    if (r.contains(t)) info.sat_mask |= std::uint64_t{1} << v;
  }
  return info;
}

// Candidate-wide canonicality: the distinct auxiliaries, in first-use order
// across the clause sequence, must be 0, 1, 2, ...
bool merge_aux_order(const std::vector<const ClauseInfo*>& infos, int* aux_used) {
  int highest = -1;
  for (const ClauseInfo* info : infos) {
    for (int i = 0; i < info->aux_count; ++i) {
      int a = info->aux_order[i];
      if (a > highest + 1) return false;
      highest = std::max(highest, a);
    }
  }
  *aux_used = highest + 1;
  return true;
}

std::optional<Implementation> run_search(const Relation& target,
                                         const std::shared_ptr<const RelationSet>& s,
                                         const SearchBudget& budget) {
  if (budget.max_clauses < 1 || budget.max_aux < 0) {
    throw ContractError("gadget search budget bounds must be positive");
  }
  int k = target.arity();
  if (k + budget.max_aux > kRelationOfBound) {
    throw ResourceError("gadget search universe exceeds the enumeration bound");
  }
  SearchSpace space{k, budget.max_aux, budget.allow_constants};

  std::vector<std::int64_t> block_start;
  std::int64_t total = 0;
  for (const Relation& r : s->relations()) {
    block_start.push_back(total);
    std::int64_t patterns = 1;
    for (int i = 0; i < r.arity(); ++i) patterns *= space.arg_count();
    total += patterns;
  }

  // Fast path: with at most 64 assignments over the full universe, each
  // clause's model set is one word and a candidate is verified with a few
  // AND operations. The suffix always covers all auxiliaries; unused ones
  // are unconstrained, so projecting them away changes nothing.
  int universe_bits = k + space.max_aux;
  bool fast = universe_bits <= 6 && total <= 5'000'000;
  std::vector<ClauseInfo> infos;
  std::uint64_t cylinder = 0;               // assignments projecting into the target
  std::vector<std::uint64_t> fibers;        // one mask per target tuple
  if (fast) {
    infos.reserve(static_cast<std::size_t>(total));
    for (std::int64_t id = 0; id < total; ++id) {
      infos.push_back(clause_info(*s, space, decode_clause(*s, space, id, block_start),
                                  universe_bits));
    }
    std::uint64_t fiber_size = std::uint64_t{1} << space.max_aux;
    std::uint64_t fiber_bits =
        fiber_size >= 64 ? ~std::uint64_t{0}
                         : (std::uint64_t{1} << fiber_size) - 1;
    for (Tuple t : target.tuples()) {
      std::uint64_t fiber = fiber_bits << (static_cast<std::uint64_t>(t) * fiber_size);
      fibers.push_back(fiber);
      cylinder |= fiber;
    }
  }

  std::int64_t steps = 0;
  std::vector<SearchClause> decoded;
  std::vector<const ClauseInfo*> picked;
  for (int count = 1; count <= budget.max_clauses; ++count) {
    std::vector<std::int64_t> idx(count, 0);
    while (true) {
      if (++steps > budget.step_cap) {
        throw ResourceError("gadget search exceeded the step cap (" +
                            std::to_string(budget.step_cap) + ")");
      }
      bool matched = false;
      int aux_used = 0;
      if (fast) {
        picked.clear();
        std::uint64_t sat = ~std::uint64_t{0};
        if (universe_bits < 6) sat = (std::uint64_t{1} << (1 << universe_bits)) - 1;
        for (std::int64_t id : idx) {
          picked.push_back(&infos[static_cast<std::size_t>(id)]);
          sat &= picked.back()->sat_mask;
        }
        if ((sat & ~cylinder) == 0 && merge_aux_order(picked, &aux_used)) {
          matched = true;
          for (std::uint64_t fiber : fibers) {
            if ((sat & fiber) == 0) {
              matched = false;
              break;
            }
          }
        }
      } else {
        decoded.clear();
        for (std::int64_t id : idx) {
          decoded.push_back(decode_clause(*s, space, id, block_start));
        }
        matched = canonical_aux_usage(decoded, space, &aux_used) &&
                  verify_candidate(*s, space, decoded, aux_used, target);
      }
      if (matched) {
        decoded.clear();
        for (std::int64_t id : idx) {
          decoded.push_back(decode_clause(*s, space, id, block_start));
        }
        // Re-verify the winner through the enumeration path; the masks and
        // the slow check must agree.
        int recheck_aux = 0;
        if (!canonical_aux_usage(decoded, space, &recheck_aux) ||
            recheck_aux != aux_used ||
            !verify_candidate(*s, space, decoded, aux_used, target)) {
          throw std::logic_error("gadget search fast path disagreed with verification");
        }
        return build_implementation(s, space, decoded, aux_used, target);
      }
      // Next non-decreasing index sequence.
      int p = count - 1;
      while (p >= 0 && idx[p] == total - 1) --p;
      if (p < 0) break;
      ++idx[p];
      for (int q = p + 1; q < count; ++q) idx[q] = idx[p];
    }
  }
  return std::nullopt;
}

std::string memo_key(const Relation& target, const RelationSet& s,
                     const SearchBudget& budget) {
  std::string key;
  auto add_table = [&key](int arity, const std::vector<Tuple>& ts) {
    key += std::to_string(arity);
    key += ':';
    for (Tuple t : ts) {
      key += std::to_string(t);
      key += ',';
    }
    key += ';';
  };
  for (const Relation& r : s.relations()) add_table(r.arity(), r.tuples());
  key += '|';
  add_table(target.arity(), target.tuples());
  key += '|';
  key += std::to_string(budget.max_clauses) + "," + std::to_string(budget.max_aux) +
         "," + (budget.allow_constants ? "c" : "n") + "," +
         std::to_string(budget.step_cap);
  return key;
}

}  // namespace

std::optional<Implementation> find_implementation(
    const Relation& target, const std::shared_ptr<const RelationSet>& s,
    const SearchBudget& budget) {
  static std::mutex mutex;
  static auto* cache =
      new std::unordered_map<std::string, std::optional<Implementation>>();
  std::string key = memo_key(target, *s, budget);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }
  std::optional<Implementation> found = run_search(target, s, budget);
  std::lock_guard<std::mutex> lock(mutex);
  return cache->emplace(std::move(key), std::move(found)).first->second;
}

namespace {

// Fresh-name dispenser respecting already taken identifiers.
class NamePool {
 public:
  explicit NamePool(const std::vector<std::string>& taken)
      : taken_(taken.begin(), taken.end()) {}

  std::string claim(const std::string& base) {
    if (taken_.insert(base).second) return base;
    for (int i = 2;; ++i) {
      std::string candidate = base + "_" + std::to_string(i);
      if (taken_.insert(candidate).second) return candidate;
    }
  }

 private:
  std::unordered_set<std::string> taken_;
};

// Rewrites an implementation's clauses into a destination universe:
// coordinate i of the gadget becomes arg_positions[i], auxiliary j becomes
// aux_positions[j]. Relation indices carry over (same set by value).
void instantiate_implementation(const Implementation& impl,
                                const std::vector<int>& arg_positions,
                                const std::vector<int>& aux_positions,
                                std::vector<Clause>* out) {
  int k = impl.target.arity();
  for (const Clause& c : impl.formula.clauses()) {
    Clause mapped;
    mapped.relation_index = c.relation_index;
    for (const Arg& a : c.args) {
      if (a.is_const()) {
        mapped.args.push_back(a);
      } else if (a.var() < k) {
        mapped.args.push_back(Arg::variable(arg_positions[a.var()]));
      } else {
        mapped.args.push_back(Arg::variable(aux_positions[a.var() - k]));
      }
    }
    out->push_back(std::move(mapped));
  }
}

bool uses_constant(const Formula& f, bool bit) {
  for (const Clause& c : f.clauses()) {
    for (const Arg& a : c.args) {
      if (a.is_const() && a.const_bit() == bit) return true;
    }
  }
  return false;
}

Relation unit_relation(bool bit) {
  return Relation(bit ? "unit_one" : "unit_zero", 1, {Tuple(bit ? 1 : 0)});
}

ReductionOutput build_unit_case(const Formula& f, const Implementation* impl0,
                                const Implementation* impl1, bool use0, bool use1) {
  NamePool pool(f.vars().names());
  std::vector<std::string> names = f.vars().names();
  int n = f.var_count();
  int pos0 = -1, pos1 = -1;
  if (use0) {
    pos0 = static_cast<int>(names.size());
    names.push_back(pool.claim("y0"));
  }
  if (use1) {
    pos1 = static_cast<int>(names.size());
    names.push_back(pool.claim("y1"));
  }
  std::vector<int> aux0, aux1;
  if (use0) {
    for (int j = 0; j < impl0->existential_suffix; ++j) {
      aux0.push_back(static_cast<int>(names.size()));
      names.push_back(pool.claim("w" + std::to_string(j + 1)));
    }
  }
  if (use1) {
    for (int j = 0; j < impl1->existential_suffix; ++j) {
      aux1.push_back(static_cast<int>(names.size()));
      names.push_back(pool.claim("w" + std::to_string(aux0.size() + j + 1)));
    }
  }
  Formula body = f.reindexed(VarOrder(names));
  if (use0) body = substitute(body, Arg::constant(false), Arg::variable(pos0));
  if (use1) body = substitute(body, Arg::constant(true), Arg::variable(pos1));
  std::vector<Clause> clauses = body.clauses();
  if (use0) instantiate_implementation(*impl0, {pos0}, aux0, &clauses);
  if (use1) instantiate_implementation(*impl1, {pos1}, aux1, &clauses);

  ReductionOutput out{Formula(f.relation_set_ptr(), body.vars(), std::move(clauses)),
                      std::vector<std::string>(f.vars().names().begin(),
                                               f.vars().names().begin() + n),
                      "unit_gadgets",
                      {}};
  if (use0) out.forced.emplace_back(pos0, false);
  if (use1) out.forced.emplace_back(pos1, true);
  return out;
}

ReductionOutput build_prefix_case(const Formula& f, const Implementation* neq,
                                  const Relation* anchor) {
  NamePool pool(f.vars().names());
  std::vector<std::string> names;
  std::string u_name = pool.claim("u");
  std::string v_name = pool.claim("v");
  names.push_back(u_name);
  names.push_back(v_name);
  for (const std::string& s : f.vars().names()) names.push_back(s);
  std::vector<int> aux;
  if (neq) {
    for (int j = 0; j < neq->existential_suffix; ++j) {
      aux.push_back(static_cast<int>(names.size()));
      names.push_back(pool.claim("w" + std::to_string(j + 1)));
    }
  }
  Formula body = f.reindexed(VarOrder(names));
  body = substitute(body, Arg::constant(false), Arg::variable(0));
  body = substitute(body, Arg::constant(true), Arg::variable(1));
  std::vector<Clause> clauses = body.clauses();
  if (neq) {
    instantiate_implementation(*neq, {0, 1}, aux, &clauses);
  } else {
    int anchor_index = f.relation_set().index_of(anchor->name());
    Clause c;
    c.relation_index = anchor_index;
    c.args.assign(anchor->arity(), Arg::variable(1));
    clauses.push_back(std::move(c));
  }
  ReductionOutput out{Formula(f.relation_set_ptr(), body.vars(), std::move(clauses)),
                      f.vars().names(),
                      neq ? "disequality_prefix" : "one_valid_anchor",
                      {{0, false}, {1, true}}};
  return out;
}

}  // namespace

ReductionOutput remove_constants(const Formula& f, const SearchBudget& budget_in) {
  if (!f.has_constant_args()) {
    throw ContractError("remove_constants: formula has no constant arguments");
  }
  SearchBudget budget = budget_in;
  budget.allow_constants = false;  // gadgets must themselves be constant-free
  const auto& s = f.relation_set_ptr();

  bool use0 = uses_constant(f, false);
  bool use1 = uses_constant(f, true);

  // Unit gadgets: applicable when both [x] and [not-x] are realizable.
  auto impl1 = find_implementation(unit_relation(true), s, budget);
  auto impl0 = find_implementation(unit_relation(false), s, budget);
  if (impl0 && impl1) {
    return build_unit_case(f, use0 ? &*impl0 : nullptr, use1 ? &*impl1 : nullptr,
                           use0, use1);
  }

  auto neq = find_implementation(Relation::from_strings("neq", 2, {"01", "10"}),
                                 s, budget);
  if (neq) return build_prefix_case(f, &*neq, nullptr);

  Taxonomy t = classify_set(*s);
  if (t.one_valid) {
    for (const Relation& r : s->relations()) {
      if (has_property(r, Property::one_valid) &&
          !has_property(r, Property::zero_valid)) {
        return build_prefix_case(f, nullptr, &r);
      }
    }
  }
  throw ReductionError(
      "no constant-removal case applies within the gadget budget");
}

namespace {

// Ternary OR with the first `negations` coordinates negated: everything but
// the single falsifying tuple.
Relation or3_shape(int negations) {
  Tuple forbidden = static_cast<Tuple>(((1 << negations) - 1) << (3 - negations));
  std::vector<Tuple> tuples;
  for (Tuple t = 0; t < 8; ++t) {
    if (t != forbidden) tuples.push_back(t);
  }
  return Relation("or3_n" + std::to_string(negations), 3, std::move(tuples));
}

// Canonical ternary form of a 1..3-literal clause: negated variables first,
// padding by repeating the last literal. Returns the argument variables and
// the number of leading negations.
std::pair<std::array<int, 3>, int> canonical_or3(const CnfClause& c) {
  std::vector<int> neg, pos;
  for (const Literal& l : c.literals()) {
    (l.positive ? pos : neg).push_back(l.var);
  }
  std::vector<int> args(neg);
  args.insert(args.end(), pos.begin(), pos.end());
  int pad = pos.empty() ? neg.back() : pos.back();
  while (args.size() < 3) args.push_back(pad);
  int negations = pos.empty() ? 3 : static_cast<int>(neg.size());
  return {{args[0], args[1], args[2]}, negations};
}

void validate_cnf(const std::vector<CnfClause>& cnf, const VarOrder& vars) {
  for (const CnfClause& c : cnf) {
    if (c.literals().empty() || c.literals().size() > 3) {
      throw ContractError("clauses must have between 1 and 3 literals");
    }
    for (const Literal& l : c.literals()) {
      if (l.var < 0 || l.var >= vars.size()) {
        throw ContractError("clause literal outside the variable universe");
      }
    }
  }
}

}  // namespace

std::optional<ReductionOutput> to_s_formula(
    const std::vector<CnfClause>& cnf, const VarOrder& vars,
    const std::shared_ptr<const RelationSet>& s, SearchBudget budget) {
  validate_cnf(cnf, vars);
  budget.allow_constants = true;  // gadgets range over formulas with constants

  std::array<std::optional<Implementation>, 4> gadget;
  std::array<bool, 4> searched{false, false, false, false};
  auto gadget_for = [&](int j) -> const std::optional<Implementation>& {
    if (!searched[j]) {
      gadget[j] = find_implementation(or3_shape(j), s, budget);
      searched[j] = true;
    }
    return gadget[j];
  };

  std::vector<std::pair<std::array<int, 3>, int>> canon;
  canon.reserve(cnf.size());
  for (const CnfClause& c : cnf) {
    canon.push_back(canonical_or3(c));
    if (!gadget_for(canon.back().second)) return std::nullopt;
  }

  NamePool pool(vars.names());
  std::vector<std::string> names = vars.names();
  std::vector<Clause> clauses;
  int fresh = 0;
  for (const auto& [args, negations] : canon) {
    const Implementation& impl = *gadget[negations];
    std::vector<int> aux;
    for (int j = 0; j < impl.existential_suffix; ++j) {
      aux.push_back(static_cast<int>(names.size()));
      names.push_back(pool.claim("y" + std::to_string(++fresh)));
    }
    instantiate_implementation(impl, {args[0], args[1], args[2]}, aux, &clauses);
  }
  return ReductionOutput{Formula(s, VarOrder(std::move(names)), std::move(clauses)),
                         vars.names(),
                         "cnf_gadgets",
                         {}};
}

ReductionOutput append_parity_gadget(const Formula& f, SearchBudget budget) {
  if (f.var_count() < 1) {
    throw ContractError("append_parity_gadget needs at least one variable");
  }
  budget.allow_constants = true;
  auto eq = find_implementation(Relation::from_strings("eq", 2, {"00", "11"}),
                                f.relation_set_ptr(), budget);
  if (!eq) {
    throw ReductionError("no equality gadget found within the search budget");
  }
  NamePool pool(f.vars().names());
  std::vector<std::string> names = f.vars().names();
  int zpos = static_cast<int>(names.size());
  names.push_back(pool.claim("z"));
  std::vector<int> aux;
  for (int j = 0; j < eq->existential_suffix; ++j) {
    aux.push_back(static_cast<int>(names.size()));
    names.push_back(pool.claim("w" + std::to_string(j + 1)));
  }
  Formula body = f.reindexed(VarOrder(names));
  std::vector<Clause> clauses = body.clauses();
  instantiate_implementation(*eq, {f.var_count() - 1, zpos}, aux, &clauses);
  return ReductionOutput{Formula(f.relation_set_ptr(), body.vars(), std::move(clauses)),
                         f.vars().names(),
                         "parity_tail",
                         {}};
}

Formula cnf_formula(const std::vector<CnfClause>& cnf, VarOrder vars) {
  validate_cnf(cnf, vars);
  std::vector<Relation> shapes;
  for (int j = 0; j < 4; ++j) shapes.push_back(or3_shape(j));
  auto set = std::make_shared<const RelationSet>(std::move(shapes));
  std::vector<Clause> clauses;
  for (const CnfClause& c : cnf) {
    auto [args, negations] = canonical_or3(c);
    Clause cl;
    cl.relation_index = negations;
    for (int i = 0; i < 3; ++i) cl.args.push_back(Arg::variable(args[i]));
    clauses.push_back(std::move(cl));
  }
  return Formula(std::move(set), std::move(vars), std::move(clauses));
}

}  // namespace lexsat
