#include "lexsat/solve.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lexsat/compile.hpp"
#include "lexsat/errors.hpp"

namespace lexsat {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::two_cnf: return "two_cnf";
    case Method::horn: return "horn";
    case Method::anti_horn: return "anti_horn";
    case Method::affine: return "affine";
    case Method::generic: return "generic";
  }
  return "?";
}

void PartialFix::set(int var, bool bit) {
  auto [it, inserted] = fixed_.emplace(var, bit);
  if (!inserted && it->second != bit) {
    throw ContractError("conflicting fix for variable " + std::to_string(var));
  }
}

std::optional<bool> PartialFix::get(int var) const {
  auto it = fixed_.find(var);
  if (it == fixed_.end()) return std::nullopt;
  return it->second;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Incremental satisfiability oracle behind the greedy optimization loop.
// Queries arrive in variable order; commits persist.
class DecisionProcedure {
 public:
  virtual ~DecisionProcedure() = default;
  // Is the formula satisfiable under the base fix plus commitments so far?
  virtual bool initial_sat() = 0;
  // Additionally var := bit; commits the value on success, leaves the state
  // untouched on failure.
  virtual bool try_fix(int var, bool bit) = 0;
  // Commits a value known to be consistent (the complement of a failed try).
  virtual void force_fix(int var, bool bit) = 0;
};

// Chronological backtracking over variables in order; a clause prunes the
// branch when its fixed arguments already exclude every tuple.
class GenericProcedure final : public DecisionProcedure {
 public:
  GenericProcedure(const Formula& f, const PartialFix& fix)
      : f_(f), n_(f.var_count()), vals_(f.var_count(), -1),
        clauses_of_(f.var_count()) {
    for (auto [v, b] : fix.entries()) vals_[v] = b ? 1 : 0;
    for (std::size_t ci = 0; ci < f.clauses().size(); ++ci) {
      for (const Arg& a : f.clauses()[ci].args) {
        if (!a.is_var()) continue;
        auto& list = clauses_of_[a.var()];
        if (list.empty() || list.back() != static_cast<int>(ci)) {
          list.push_back(static_cast<int>(ci));
        }
      }
    }
  }

  bool initial_sat() override { return search(); }

  bool try_fix(int var, bool bit) override {
    vals_[var] = bit ? 1 : 0;
    if (search()) return true;
    vals_[var] = -1;
    return false;
  }

  void force_fix(int var, bool bit) override { vals_[var] = bit ? 1 : 0; }

 private:
  bool clause_possible(int ci) const {
    const Clause& c = f_.clauses()[ci];
    const Relation& r = f_.clause_relation(c);
    int k = r.arity();
    for (Tuple t : r.tuples()) {
      bool match = true;
      for (int coord = 0; coord < k; ++coord) {
        const Arg& a = c.args[coord];
        int want = a.is_const() ? (a.const_bit() ? 1 : 0) : vals_[a.var()];
        if (want >= 0 && want != static_cast<int>(tuple_bit(t, coord, k))) {
          match = false;
          break;
        }
      }
      if (match) return true;
    }
    return false;
  }

  bool search() {
    for (std::size_t ci = 0; ci < f_.clauses().size(); ++ci) {
      if (!clause_possible(static_cast<int>(ci))) return false;
    }
    return extend(0);
  }

  bool extend(int pos) {
    while (pos < n_ && vals_[pos] != -1) ++pos;
    if (pos == n_) return true;
    for (int b = 0; b < 2; ++b) {
      vals_[pos] = b;
      bool viable = true;
      for (int ci : clauses_of_[pos]) {
        if (!clause_possible(ci)) {
          viable = false;
          break;
        }
      }
      if (viable && extend(pos + 1)) {
        vals_[pos] = -1;
        return true;
      }
    }
    vals_[pos] = -1;
    return false;
  }

  const Formula& f_;
  int n_;
  std::vector<std::int8_t> vals_;
  std::vector<std::vector<int>> clauses_of_;
};

// Counter-based unit propagation over Horn-shaped clauses. With trigger
// value 1 this propagates forced ones through horn clauses; with trigger
// value 0 it propagates forced zeros through anti-horn clauses. A clause
// fires once every trigger literal is killed, forcing its head (the single
// opposite-polarity literal) to the trigger value.
class HornProcedure final : public DecisionProcedure {
 public:
  HornProcedure(const CompiledForm& form, const PartialFix& fix, bool trigger_value)
      : tv_(trigger_value ? 1 : 0), n_(form.var_count), vals_(form.var_count, -1),
        trigger_occ_(form.var_count) {
    for (const CnfClause& c : form.clauses) {
      int head = -1;
      int body = 0;
      int id = static_cast<int>(heads_.size());
      for (const Literal& l : c.literals()) {
        bool is_trigger = (l.positive ? 1 : 0) != tv_;
        if (is_trigger) {
          trigger_occ_[l.var].push_back(id);
          ++body;
        } else {
          head = l.var;
        }
      }
      heads_.push_back(head);
      counter_.push_back(body);
    }
    for (auto [v, b] : fix.entries()) {
      vals_[v] = b ? 1 : 0;
      if (vals_[v] == tv_) pushed_.push_back(v);
    }
    for (int id = 0; id < static_cast<int>(heads_.size()); ++id) {
      if (counter_[id] == 0 && !fire(id)) conflict_ = true;
    }
    if (!conflict_ && !propagate()) conflict_ = true;
  }

  bool initial_sat() override { return !conflict_; }

  bool try_fix(int var, bool bit) override {
    int b = bit ? 1 : 0;
    if (vals_[var] != -1) return vals_[var] == b;
    if (b != tv_) {
      // Non-trigger values never propagate; consistency follows from the
      // least-model argument.
      vals_[var] = b;
      return true;
    }
    std::size_t mark = pushed_.size();
    assign(var);
    if (propagate()) return true;
    for (std::size_t i = mark; i < qhead_; ++i) {
      for (int id : trigger_occ_[pushed_[i]]) ++counter_[id];
    }
    for (std::size_t i = mark; i < pushed_.size(); ++i) vals_[pushed_[i]] = -1;
    pushed_.resize(mark);
    qhead_ = mark;
    return false;
  }

  void force_fix(int var, bool bit) override {
    int b = bit ? 1 : 0;
    if (vals_[var] != -1) {
      if (vals_[var] != b) throw std::logic_error("inconsistent forced fix");
      return;
    }
    if (b != tv_) {
      vals_[var] = b;
      return;
    }
    assign(var);
    if (!propagate()) throw std::logic_error("forced fix conflicted");
  }

 private:
  void assign(int var) {
    vals_[var] = static_cast<std::int8_t>(tv_);
    pushed_.push_back(var);
  }

  bool fire(int id) {
    int head = heads_[id];
    if (head < 0) return false;
    if (vals_[head] == tv_) return true;
    if (vals_[head] == 1 - tv_) return false;
    assign(head);
    return true;
  }

  bool propagate() {
    while (qhead_ < pushed_.size()) {
      int v = pushed_[qhead_++];
      bool conflict = false;
      // Finish the whole occurrence list even on conflict so the counter
      // deltas of this variable stay undoable as a unit.
      for (int id : trigger_occ_[v]) {
        if (--counter_[id] == 0 && !fire(id)) conflict = true;
      }
      if (conflict) return false;
    }
    return true;
  }

  int tv_;
  int n_;
  bool conflict_ = false;
  std::vector<std::int8_t> vals_;
  std::vector<std::vector<int>> trigger_occ_;
  std::vector<int> heads_;
  std::vector<int> counter_;
  std::vector<int> pushed_;
  std::size_t qhead_ = 0;
};

// Implication-graph procedure for 2-CNF. One strongly-connected-component
// pass decides base satisfiability (a variable sharing a component with its
// negation is contradictory); afterwards queries propagate literals over the
// graph with trail-based rollback. For a satisfiable base formula a
// propagation without conflict is a complete satisfiability certificate.
class TwoCnfProcedure final : public DecisionProcedure {
 public:
  TwoCnfProcedure(const CompiledForm& form, const PartialFix& fix)
      : n_(form.var_count), adj_(2 * static_cast<std::size_t>(form.var_count)),
        vals_(form.var_count, -1) {
    for (const CnfClause& c : form.clauses) {
      const auto& lits = c.literals();
      if (lits.empty()) {
        contradiction_ = true;
      } else if (lits.size() == 1) {
        add_edge(negation(lits[0]), node(lits[0]));
      } else {
        add_edge(negation(lits[0]), node(lits[1]));
        add_edge(negation(lits[1]), node(lits[0]));
      }
    }
    for (auto [v, b] : fix.entries()) base_fix_.emplace_back(v, b);
  }

  bool initial_sat() override {
    if (contradiction_) return false;
    if (!scc_consistent()) return false;
    for (auto [v, b] : base_fix_) {
      if (vals_[v] != -1 ? vals_[v] != (b ? 1 : 0) : !propagate(v, b)) return false;
    }
    return true;
  }

  bool try_fix(int var, bool bit) override {
    if (vals_[var] != -1) return vals_[var] == (bit ? 1 : 0);
    std::size_t mark = trail_.size();
    if (propagate(var, bit)) return true;
    for (std::size_t i = mark; i < trail_.size(); ++i) vals_[trail_[i]] = -1;
    trail_.resize(mark);
    return false;
  }

  void force_fix(int var, bool bit) override {
    if (vals_[var] != -1) {
      if (vals_[var] != (bit ? 1 : 0)) throw std::logic_error("inconsistent forced fix");
      return;
    }
    if (!propagate(var, bit)) throw std::logic_error("forced fix conflicted");
  }

 private:
  // Node 2*var+value asserts "var == value".
  static int node_of(int var, bool value) { return 2 * var + (value ? 1 : 0); }
  static int node(const Literal& l) { return node_of(l.var, l.positive); }
  static int negation(const Literal& l) { return node_of(l.var, !l.positive); }

  void add_edge(int from, int to) { adj_[from].push_back(to); }

  bool propagate(int var, bool bit) {
    std::vector<int> stack;
    vals_[var] = bit ? 1 : 0;
    trail_.push_back(var);
    stack.push_back(node_of(var, bit));
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int w : adj_[u]) {
        int wv = w >> 1;
        int wb = w & 1;
        if (vals_[wv] == -1) {
          vals_[wv] = static_cast<std::int8_t>(wb);
          trail_.push_back(wv);
          stack.push_back(w);
        } else if (vals_[wv] != wb) {
          return false;
        }
      }
    }
    return true;
  }

  bool scc_consistent() const {
    std::size_t nodes = adj_.size();
    std::vector<int> num(nodes, -1), low(nodes, 0), comp(nodes, -1), stk;
    std::vector<std::uint8_t> onstk(nodes, 0);
    std::vector<std::pair<int, std::size_t>> call;
    int counter = 0, ncomp = 0;
    for (std::size_t root = 0; root < nodes; ++root) {
      if (num[root] != -1) continue;
      call.emplace_back(static_cast<int>(root), 0);
      while (!call.empty()) {
        int u = call.back().first;
        std::size_t ei = call.back().second;
        if (ei == 0) {
          num[u] = low[u] = counter++;
          stk.push_back(u);
          onstk[u] = 1;
        }
        if (ei < adj_[u].size()) {
          ++call.back().second;
          int w = adj_[u][ei];
          if (num[w] == -1) {
            call.emplace_back(w, 0);
          } else if (onstk[w]) {
            low[u] = std::min(low[u], num[w]);
          }
        } else {
          if (low[u] == num[u]) {
            while (true) {
              int w = stk.back();
              stk.pop_back();
              onstk[w] = 0;
              comp[w] = ncomp;
              if (w == u) break;
            }
            ++ncomp;
          }
          call.pop_back();
          if (!call.empty()) {
            low[call.back().first] = std::min(low[call.back().first], low[u]);
          }
        }
      }
    }
    for (int v = 0; v < n_; ++v) {
      if (comp[node_of(v, false)] == comp[node_of(v, true)]) return false;
    }
    return true;
  }

  int n_;
  bool contradiction_ = false;
  std::vector<std::vector<int>> adj_;
  std::vector<std::int8_t> vals_;
  std::vector<int> trail_;
  std::vector<std::pair<int, bool>> base_fix_;
};

// Incremental elimination over GF(2). Rows are pivoted on their least
// significant (largest-index) variable, so a committed prefix determines the
// pivot variable of every row it completes; free variables are those without
// a pivot row. Once the basis reaches full rank over the unfixed variables
// the unique solution is computed and the remaining equations are verified
// directly against it.
class AffineProcedure final : public DecisionProcedure {
 public:
  AffineProcedure(const CompiledForm& form, const PartialFix& fix)
      : n_(form.var_count), words_((form.var_count + 63) / 64),
        pivot_rows_(form.var_count), pivot_rhs_(form.var_count, 0),
        vals_(form.var_count, -1), acc_(words_, 0) {
    for (auto [v, b] : fix.entries()) {
      vals_[v] = b ? 1 : 0;
      if (b) acc_[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
    int free_total = n_ - static_cast<int>(fix.entries().size());
    int rank = 0;
    std::vector<std::uint64_t> scratch(words_);
    for (const LinearEquation& eq : form.equations) {
      if (conflict_) break;
      if (have_solution_) {
        bool parity = false;
        for (int v : eq.vars) parity ^= solved_[v] != 0;
        if (parity != eq.rhs) conflict_ = true;
        continue;
      }
      std::fill(scratch.begin(), scratch.end(), 0);
      bool rhs = eq.rhs;
      int top_word = -1;
      for (int v : eq.vars) {
        if (vals_[v] != -1) {
          rhs ^= vals_[v] != 0;
        } else {
          scratch[v >> 6] ^= std::uint64_t{1} << (v & 63);
          top_word = std::max(top_word, v >> 6);
        }
      }
      while (true) {
        int p = top_bit(scratch, top_word);
        if (p < 0) {
          if (rhs) conflict_ = true;
          break;
        }
        top_word = p >> 6;
        if (pivot_rows_[p].empty()) {
          pivot_rows_[p].assign(scratch.begin(), scratch.begin() + top_word + 1);
          pivot_rhs_[p] = rhs ? 1 : 0;
          if (++rank == free_total) compute_solution();
          break;
        }
        const auto& row = pivot_rows_[p];
        for (std::size_t w = 0; w < row.size(); ++w) scratch[w] ^= row[w];
        rhs ^= pivot_rhs_[p] != 0;
      }
    }
  }

  bool initial_sat() override { return !conflict_; }

  bool try_fix(int var, bool bit) override {
    if (vals_[var] != -1) return vals_[var] == (bit ? 1 : 0);
    int forced = forced_value(var);
    if (forced == -1) {
      commit(var, bit);
      return true;
    }
    if (forced != (bit ? 1 : 0)) return false;
    commit(var, bit);
    return true;
  }

  void force_fix(int var, bool bit) override {
    if (vals_[var] != -1) {
      if (vals_[var] != (bit ? 1 : 0)) throw std::logic_error("inconsistent forced fix");
      return;
    }
    commit(var, bit);
  }

 private:
  static int top_bit(const std::vector<std::uint64_t>& row, int hint_word) {
    for (int w = hint_word; w >= 0; --w) {
      if (row[w]) return (w << 6) + 63 - std::countl_zero(row[w]);
    }
    return -1;
  }

  // Commitments arrive in ascending variable order, so a pivot row at `var`
  // only involves already committed variables besides the pivot itself.
  int forced_value(int var) const {
    if (have_solution_) return solved_[var];
    if (pivot_rows_[var].empty()) return -1;
    const auto& row = pivot_rows_[var];
    int ones = 0;
    for (std::size_t w = 0; w < row.size(); ++w) {
      ones += std::popcount(row[w] & acc_[w]);
    }
    return ((ones & 1) != 0) != (pivot_rhs_[var] != 0) ? 1 : 0;
  }

  void compute_solution() {
    solved_.assign(n_, 0);
    std::vector<std::uint64_t> sol_bits(words_, 0);
    for (int v = 0; v < n_; ++v) {
      int bit;
      if (vals_[v] != -1) {
        bit = vals_[v];
      } else {
        const auto& row = pivot_rows_[v];
        int ones = 0;
        for (std::size_t w = 0; w < row.size(); ++w) {
          ones += std::popcount(row[w] & sol_bits[w]);
        }
        bit = ((ones & 1) != 0) != (pivot_rhs_[v] != 0) ? 1 : 0;
      }
      solved_[v] = static_cast<std::uint8_t>(bit);
      if (bit) sol_bits[v >> 6] |= std::uint64_t{1} << (v & 63);
    }
    have_solution_ = true;
  }

  void commit(int var, bool bit) {
    vals_[var] = bit ? 1 : 0;
    if (bit) acc_[var >> 6] |= std::uint64_t{1} << (var & 63);
  }

  int n_;
  int words_;
  bool conflict_ = false;
  bool have_solution_ = false;
  std::vector<std::vector<std::uint64_t>> pivot_rows_;
  std::vector<std::uint8_t> pivot_rhs_;
  std::vector<std::int8_t> vals_;
  std::vector<std::uint64_t> acc_;
  std::vector<std::uint8_t> solved_;
};

void validate_fix(const Formula& f, const PartialFix& fix) {
  for (auto [v, b] : fix.entries()) {
    (void)b;
    if (v < 0 || v >= f.var_count()) {
      throw ContractError("fix references variable index " + std::to_string(v) +
                          " outside the universe");
    }
  }
}

std::unique_ptr<DecisionProcedure> make_procedure(const Formula& f, Method method,
                                                  const PartialFix& fix) {
  validate_fix(f, fix);
  switch (method) {
    case Method::generic:
      return std::make_unique<GenericProcedure>(f, fix);
    case Method::horn:
      return std::make_unique<HornProcedure>(
          compile_formula(f, CompiledKind::horn_cnf), fix, true);
    case Method::anti_horn:
      return std::make_unique<HornProcedure>(
          compile_formula(f, CompiledKind::anti_horn_cnf), fix, false);
    case Method::two_cnf:
      return std::make_unique<TwoCnfProcedure>(
          compile_formula(f, CompiledKind::two_cnf), fix);
    case Method::affine:
      return std::make_unique<AffineProcedure>(
          compile_formula(f, CompiledKind::linear_system), fix);
  }
  throw ContractError("unknown method");
}

}  // namespace

bool decide_sat(const Formula& f, const PartialFix& fix, Method method) {
  return make_procedure(f, method, fix)->initial_sat();
}

SolveResult lex_opt(const Formula& f, Direction direction, Method method) {
  auto start = Clock::now();
  PartialFix none;
  auto proc = make_procedure(f, method, none);
  SolveResult res;
  res.method = std::string(method_name(method));
  res.stats.decision_calls = 1;
  if (!proc->initial_sat()) {
    res.status = Status::unsat;
    res.stats.millis = elapsed_ms(start);
    return res;
  }
  int n = f.var_count();
  Assignment a = Assignment::zeros(n);
  bool preferred = direction == Direction::max;
  for (int i = 0; i < n; ++i) {
    ++res.stats.decision_calls;
    if (proc->try_fix(i, preferred)) {
      a.set_bit(i, preferred);
    } else {
      proc->force_fix(i, !preferred);
      a.set_bit(i, !preferred);
    }
  }
  if (!evaluate(f, a)) {
    throw std::logic_error("lex_opt produced a non-model");
  }
  res.status = Status::sat;
  res.assignment = std::move(a);
  res.stats.millis = elapsed_ms(start);
  return res;
}

Method method_for(const Taxonomy& t) {
  if (t.horn) return Method::horn;
  if (t.anti_horn) return Method::anti_horn;
  if (t.bijunctive) return Method::two_cnf;
  if (t.affine) return Method::affine;
  return Method::generic;
}

SolveResult dispatch(const Formula& f, bool allow_constants, Direction direction,
                     Fallback fallback) {
  auto start = Clock::now();
  Taxonomy t = classify_set(f.relation_set());
  if (!allow_constants && !f.has_constant_args()) {
    bool valid = direction == Direction::min ? t.zero_valid : t.one_valid;
    if (valid) {
      int n = f.var_count();
      Assignment a = direction == Direction::min ? Assignment::zeros(n)
                                                 : Assignment::ones(n);
      if (!evaluate(f, a)) {
        throw std::logic_error("validity shortcut produced a non-model");
      }
      SolveResult res;
      res.status = Status::sat;
      res.assignment = std::move(a);
      res.method = direction == Direction::min ? "zero_valid" : "one_valid";
      res.stats.decision_calls = 0;
      res.stats.millis = elapsed_ms(start);
      return res;
    }
  }
  Method m = method_for(t);
  if (m == Method::generic && fallback == Fallback::forbid) {
    std::string validity = direction == Direction::min ? "zero_valid" : "one_valid";
    std::string missing = "horn, anti_horn, bijunctive, affine";
    if (!allow_constants) missing += ", " + validity;
    throw DispatchError("fallback forbidden and the set has none of: " + missing);
  }
  return lex_opt(f, direction, m);
}

SolveResult brute_force_lex_opt(const Formula& f, Direction direction, int bound) {
  int n = f.var_count();
  if (n > bound || n > kBruteForceBound) {
    throw ResourceError("brute_force_lex_opt: " + std::to_string(n) +
                        " variables exceed the bound");
  }
  auto start = Clock::now();
  SolveResult res;
  res.method = "brute_force";
  std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t i = 0; i < limit; ++i) {
    std::uint64_t v = direction == Direction::min ? i : limit - 1 - i;
    ++res.stats.decision_calls;
    if (evaluate_packed(f, v)) {
      res.status = Status::sat;
      res.assignment = Assignment::from_uint(v, n);
      res.stats.millis = elapsed_ms(start);
      return res;
    }
  }
  res.status = Status::unsat;
  res.stats.millis = elapsed_ms(start);
  return res;
}

bool sat_nontrivial(const Formula& f) {
  int n = f.var_count();
  // With at most one variable every assignment is constant, hence excluded.
  if (n <= 1) return false;
  Method m = method_for(classify_set(f.relation_set()));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      PartialFix fix;
      fix.set(i, true);
      fix.set(j, false);
      if (decide_sat(f, fix, m)) return true;
    }
  }
  return false;
}

bool odd_opt(const Formula& f, Direction direction, bool allow_constants) {
  if (f.var_count() == 0) return false;
  SolveResult res = dispatch(f, allow_constants, direction, Fallback::allow);
  return res.sat() && res.assignment->bit(f.var_count() - 1);
}

}  // namespace lexsat
