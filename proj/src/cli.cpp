#include "lexsat/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "CLI11.hpp"
#include "lexsat/classify.hpp"
#include "lexsat/errors.hpp"
#include "lexsat/generate.hpp"
#include "lexsat/instance.hpp"
#include "lexsat/reduce.hpp"
#include "lexsat/solve.hpp"

namespace lexsat {

namespace {

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

const char* verdict(bool poly) { return poly ? "poly" : "hard"; }
const char* flag(bool b) { return b ? "true" : "false"; }

std::string class_label(const Taxonomy& t) {
  if (t.horn) return "horn";
  if (t.anti_horn) return "anti_horn";
  if (t.bijunctive) return "bijunctive";
  if (t.affine) return "affine";
  if (t.zero_valid) return "zero_valid";
  if (t.one_valid) return "one_valid";
  return "hard";
}

SearchBudget budget_from_env(int max_clauses, int max_aux) {
  SearchBudget b;
  b.max_clauses = max_clauses;
  b.max_aux = max_aux;
  if (const char* cap = std::getenv("LEXSAT_STEP_CAP")) {
    char* end = nullptr;
    long long value = std::strtoll(cap, &end, 10);
    if (end && *end == '\0' && value > 0) b.step_cap = value;
  }
  return b;
}

int cmd_classify(const std::string& path, std::ostream& out) {
  Instance inst = load_instance(path);
  Taxonomy t = classify_set(*inst.relations);
  out << "zero_valid=" << flag(t.zero_valid) << "\n"
      << "one_valid=" << flag(t.one_valid) << "\n"
      << "horn=" << flag(t.horn) << "\n"
      << "anti_horn=" << flag(t.anti_horn) << "\n"
      << "bijunctive=" << flag(t.bijunctive) << "\n"
      << "affine=" << flag(t.affine) << "\n";
  for (Direction dir : {Direction::min, Direction::max}) {
    DispatchVerdict v = dispatch_verdict(*inst.relations, false, dir);
    const char* prefix = dir == Direction::min ? "min" : "max";
    out << prefix << "_with_constants=" << verdict(v.with_constants_poly) << "\n"
        << prefix << "_without_constants=" << verdict(v.without_constants_poly)
        << "\n"
        << prefix << "_reason=" << v.reason << "\n";
  }
  return 0;
}

int print_solution(const SolveResult& res, std::ostream& out) {
  if (res.sat()) {
    out << res.assignment->to_string() << "\n";
    return 0;
  }
  out << "UNSAT\n";
  return 1;
}

int cmd_solve(const std::string& path, Direction dir, bool no_fallback,
              std::ostream& out) {
  Instance inst = load_instance(path);
  SolveResult res =
      dispatch(inst.formula, inst.formula.has_constant_args(), dir,
               no_fallback ? Fallback::forbid : Fallback::allow);
  return print_solution(res, out);
}

int cmd_oracle(const std::string& path, Direction dir, std::ostream& out) {
  Instance inst = load_instance(path);
  return print_solution(brute_force_lex_opt(inst.formula, dir), out);
}

int cmd_odd(const std::string& path, Direction dir, std::ostream& out) {
  Instance inst = load_instance(path);
  bool odd = odd_opt(inst.formula, dir, inst.formula.has_constant_args());
  out << (odd ? "true" : "false") << "\n";
  return 0;
}

int cmd_reduce(const std::string& mode, const std::string& path,
               const SearchBudget& budget, std::ostream& out) {
  Instance inst = load_instance(path);
  ReductionOutput red = mode == "parity"
                            ? append_parity_gadget(inst.formula, budget)
                            : remove_constants(inst.formula, budget);
  std::string kept = "kept:";
  for (const std::string& name : red.kept) kept += " " + name;
  out << serialize_instance(red.formula.relation_set(), red.formula,
                            {kept, "case: " + red.case_tag});
  return 0;
}

std::shared_ptr<const RelationSet> resolve_relations(const std::string& preset_name,
                                                     const std::string& relations_file) {
  if (!relations_file.empty()) return load_instance(relations_file).relations;
  auto set = preset(preset_name);
  if (!set) {
    std::string names;
    for (const std::string& n : preset_names()) names += " " + n;
    throw ContractError("unknown preset '" + preset_name + "'; available:" + names);
  }
  return set;
}

int cmd_gen(const GenSpec& spec, std::ostream& out) {
  Instance inst = generate(spec);
  out << serialize_instance(*inst.relations, inst.formula);
  return 0;
}

int cmd_bench(GenSpec spec, int count, Direction dir, std::ostream& out) {
  Taxonomy t = classify_set(*spec.relations);
  std::string label = class_label(t);
  std::uint64_t base_seed = spec.seed;
  out << "n,m,class,method,millis,decision_calls\n";
  for (int i = 0; i < count; ++i) {
    spec.seed = base_seed + static_cast<std::uint64_t>(i);
    Instance inst = generate(spec);
    SolveResult res = dispatch(inst.formula, inst.formula.has_constant_args(),
                               dir, Fallback::allow);
    out << spec.var_count << "," << spec.clause_count << "," << label << ","
        << res.method << "," << std::fixed << std::setprecision(3)
        << res.stats.millis << "," << res.stats.decision_calls << "\n";
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"lexicographically optimal assignments of relation-constraint formulas"};
  app.require_subcommand(1);

  std::string file;
  bool want_min = false, want_max = false, no_fallback = false;

  auto add_direction = [&](CLI::App* sub) {
    sub->add_flag("--min", want_min, "lexicographically minimal assignment");
    sub->add_flag("--max", want_max, "lexicographically maximal assignment");
  };

  CLI::App* classify = app.add_subcommand("classify", "print taxonomy flags and dispatch verdicts");
  classify->add_option("file", file, "instance file")->required();

  CLI::App* solve = app.add_subcommand("solve", "lexicographically optimal assignment");
  solve->add_option("file", file, "instance file")->required();
  add_direction(solve);
  solve->add_flag("--no-fallback", no_fallback, "fail instead of using the exponential path");

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force reference solver");
  oracle->add_option("file", file, "instance file")->required();
  add_direction(oracle);

  CLI::App* odd = app.add_subcommand("odd", "does the largest variable get value 1?");
  odd->add_option("file", file, "instance file")->required();
  add_direction(odd);

  std::string reduce_mode;
  int max_clauses = 3, max_aux = 2;
  CLI::App* reduce = app.add_subcommand("reduce", "instance transformations");
  reduce->add_option("mode", reduce_mode, "remove-constants | parity")
      ->required()
      ->check(CLI::IsMember({"remove-constants", "parity"}));
  reduce->add_option("file", file, "instance file")->required();
  reduce->add_option("--max-clauses", max_clauses, "gadget search clause budget");
  reduce->add_option("--max-aux", max_aux, "gadget search auxiliary budget");

  std::string preset_name = "mixed", relations_file;
  int gen_n = 10, gen_m = 20, bench_count = 10;
  double const_prob = 0.0;
  std::uint64_t seed = 1;

  auto add_gen_options = [&](CLI::App* sub) {
    sub->add_option("--preset", preset_name, "named relation set");
    sub->add_option("--relations", relations_file, "take the relation set from this instance file");
    sub->add_option("-n,--vars", gen_n, "variable count");
    sub->add_option("-m,--clauses", gen_m, "clause count");
    sub->add_option("--const-prob", const_prob, "probability of a constant argument");
    sub->add_option("--seed", seed, "RNG seed");
  };

  CLI::App* gen = app.add_subcommand("gen", "print a random instance");
  add_gen_options(gen);

  CLI::App* bench = app.add_subcommand("bench", "solve a seeded sweep, print CSV");
  add_gen_options(bench);
  bench->add_option("--count", bench_count, "number of instances");
  add_direction(bench);

  std::vector<const char*> argv;
  argv.push_back("lexsat");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  auto direction = [&](Direction fallback_dir) -> Direction {
    if (want_min == want_max) {
      throw ContractError("exactly one of --min/--max is required");
    }
    (void)fallback_dir;
    return want_min ? Direction::min : Direction::max;
  };

  try {
    if (app.got_subcommand(classify)) return cmd_classify(file, out);
    if (app.got_subcommand(solve)) return cmd_solve(file, direction(Direction::min), no_fallback, out);
    if (app.got_subcommand(oracle)) return cmd_oracle(file, direction(Direction::min), out);
    if (app.got_subcommand(odd)) return cmd_odd(file, direction(Direction::min), out);
    if (app.got_subcommand(reduce)) {
      return cmd_reduce(reduce_mode, file, budget_from_env(max_clauses, max_aux), out);
    }
    if (app.got_subcommand(gen) || app.got_subcommand(bench)) {
      GenSpec spec;
      spec.relations = resolve_relations(preset_name, relations_file);
      spec.var_count = gen_n;
      spec.clause_count = gen_m;
      spec.const_prob = const_prob;
      spec.seed = seed;
      if (app.got_subcommand(gen)) return cmd_gen(spec, out);
      Direction dir = want_min == want_max ? Direction::min
                      : want_min           ? Direction::min
                                           : Direction::max;
      return cmd_bench(std::move(spec), bench_count, dir, out);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    // DispatchError, ReductionError, PreconditionError, ResourceError.
    err << "error: " << e.what() << "\n";
    return 3;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace lexsat
