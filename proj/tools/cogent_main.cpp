#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cogent/acceptance.hpp"
#include "cogent/bopo.hpp"
#include "cogent/error.hpp"
#include "cogent/generate.hpp"
#include "cogent/grammar.hpp"
#include "cogent/instance_io.hpp"
#include "cogent/oracle.hpp"
#include "cogent/parallel.hpp"
#include "cogent/pda.hpp"
#include "cogent/pipeline.hpp"
#include "cogent/policies.hpp"
#include "cogent/repair.hpp"
#include "cogent/solution_text.hpp"

namespace fs = std::filesystem;
using namespace cogent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptance = 2;
constexpr int kExitInput = 3;

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

/// Writes to --out when given, stdout otherwise.
void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(ErrorCode::FormatError, "cannot write " + g.out);
  f << text;
}

Solution read_solution(const Instance& inst, const std::string& path) {
  const std::string text = path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_text_file(path);
  return parse_solution(inst.kind, inst.size(), text);
}

nlohmann::ordered_json report_json(const ViolationReport& r) {
  nlohmann::ordered_json j;
  j["feasible"] = r.feasible;
  j["magnitude"] = r.magnitude;
  auto list = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) list.push_back({{"constraint", v.constraint}, {"detail", v.detail}, {"amount", v.amount}});
  j["violations"] = list;
  return j;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  int size = 10;
  int count = 1;
  std::string distribution;
  int machines = 0;
};

int cmd_gen(const Globals& g, const GenArgs& a) {
  const ProblemKind kind = parse_kind(a.kind);
  const Distribution dist = a.distribution.empty() ? default_distribution(kind) : parse_distribution(a.distribution);
  check_distribution(kind, dist);
  const fs::path dir = g.out.empty() ? fs::path(".") : fs::path(g.out);
  fs::create_directories(dir);
  GenerateOptions opts;
  opts.machines = a.machines;
  for (int i = 0; i < a.count; ++i) {
    const auto inst = generate_instance(kind, a.size, dist, g.seed + static_cast<std::uint64_t>(i), opts);
    const fs::path path = dir / (inst.id + ".json");
    save_instance(path, inst);
    std::cout << path.string() << "\n";
  }
  return kExitOk;
}

struct SolveArgs {
  std::vector<std::string> inputs;
  std::string policy = "heuristic";
  std::string mode = "single";
  int n_samples = 8;
  double temperature = 0.7;
  bool greedy = false;
  int n_min = 8;
  int n_max = 64;
  double tau = 0.85;
  int batch = 1;
  bool match_objective = false;
  bool no_oracle = false;
  bool timing = false;
  bool pretty = false;
};

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.path().extension() == ".json") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(in);
    }
  }
  return files;
}

int cmd_solve(const Globals& g, const SolveArgs& a) {
  std::vector<Instance> instances;
  for (const auto& f : expand_inputs(a.inputs)) instances.push_back(load_instance(f));
  if (instances.empty()) throw Error(ErrorCode::FormatError, "no instance files given");
  SolveOptions opts;
  opts.policy = a.policy;
  opts.mode = parse_solve_mode(a.mode);
  opts.n_samples = a.n_samples;
  opts.decode.temperature = a.temperature;
  opts.decode.greedy = a.greedy;
  opts.decode.seed = g.seed;
  opts.sampler.n_min = a.n_min;
  opts.sampler.n_max = a.n_max;
  opts.sampler.tau = a.tau;
  opts.sampler.batch = a.batch;
  opts.sampler.match_by_objective = a.match_objective;
  validate(opts.sampler);
  opts.with_oracle = !a.no_oracle;
  opts.timing = a.timing;
  // Policy specs are validated up front so a bad spec is an input error, not N record errors.
  (void)make_policy(opts.policy, instances.front());
  const auto report = run_pipeline(instances, opts);
  emit(g, a.pretty ? report_to_table(report) : report_to_jsonl(report));
  const auto& agg = report.aggregates;
  if (agg.instances > agg.errors && agg.feasibility_post < 100.0) {
    std::cerr << "post-repair feasibility below 100%\n";
    return kExitAcceptance;
  }
  return agg.errors > 0 ? kExitInput : kExitOk;
}

int cmd_repair(const Globals& g, const std::string& instance_path, const std::string& solution_path) {
  const auto inst = load_instance(instance_path);
  const auto raw = read_solution(inst, solution_path);
  const auto out = repair(inst, raw);
  emit(g, format_solution(inst, out.repaired) + "\n");
  nlohmann::ordered_json j;
  j["modified"] = out.modified;
  j["v"] = out.input_magnitude;
  j["d"] = out.distance_moved;
  j["alpha_v"] = out.alpha_bound * out.input_magnitude;
  j["feasible"] = check_feasibility(inst, out.repaired).feasible;
  (g.out.empty() ? std::cerr : std::cout) << j.dump() << "\n";
  return kExitOk;
}

int cmd_eval(const Globals& g, const std::string& instance_path, const std::string& solution_path,
             std::optional<double> reference, bool oracle) {
  const auto inst = load_instance(instance_path);
  const auto sol = read_solution(inst, solution_path);
  const auto rep = check_feasibility(inst, sol);
  auto j = report_json(rep);
  try {
    j["objective"] = objective(inst, sol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CyclicSchedule && e.code() != ErrorCode::InvalidSolution) throw;
    j["objective"] = nullptr;
  }
  if (oracle && !reference) reference = brute_force(inst, Exec::Parallel).value;
  if (reference) {
    j["reference"] = *reference;
    if (j["objective"].is_number() && rep.feasible) {
      j["gap"] = optimality_gap(j["objective"].get<double>(), *reference, sense_of(inst.kind));
    }
  }
  emit(g, j.dump() + "\n");
  return kExitOk;
}

int cmd_oracle(const Globals& g, const std::string& instance_path) {
  const auto inst = load_instance(instance_path);
  const auto res = brute_force(inst, Exec::Parallel);
  std::ostringstream os;
  os << format_solution(inst.kind, res.solution, res.value) << "\n";
  char line[128];
  std::snprintf(line, sizeof line, "value %.6f explored %llu\n", res.value,
                static_cast<unsigned long long>(res.explored));
  emit(g, os.str());
  std::cerr << line;
  return kExitOk;
}

struct GrammarArgs {
  std::string instance;
  std::string kind;
  int size = 0;
  std::string text_file;
  bool bnf = false;
};

int cmd_grammar_check(const Globals& g, const GrammarArgs& a) {
  ProblemKind kind;
  int size = a.size;
  if (!a.instance.empty()) {
    const auto inst = load_instance(a.instance);
    kind = inst.kind;
    size = inst.size();
  } else {
    if (a.kind.empty() || size < 1) throw Error(ErrorCode::DomainError, "give --instance or --kind and --size");
    kind = parse_kind(a.kind);
  }
  if (a.bnf || a.text_file.empty()) {
    emit(g, build_grammar(kind, size).to_bnf());
    if (a.text_file.empty()) return kExitOk;
  }
  const std::string text =
      a.text_file == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {}) : read_text_file(a.text_file);
  std::istringstream lines(text);
  std::string line;
  int bad = 0, total = 0;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++total;
    try {
      (void)parse_solution(kind, size, line);
      std::cout << "valid\n";
    } catch (const ParseError& e) {
      ++bad;
      std::cout << "invalid " << e.what() << "\n";
    }
  }
  return bad == 0 && total > 0 ? kExitOk : kExitAcceptance;
}

struct TrainArgs {
  std::string problem = "tsp";
  int size = 5;
  int steps = 400;
  std::optional<double> lr;
  double beta = 0.1;
  int k = 8;
};

int cmd_train_toy(const Globals& g, const TrainArgs& a) {
  const ProblemKind kind = parse_kind(a.problem);
  const auto inst = generate_instance(kind, a.size, default_distribution(kind), g.seed);
  const auto support = enumerate_feasible(inst, 5040);
  TrainConfig cfg;
  cfg.steps = a.steps;
  cfg.learning_rate = a.lr;
  cfg.beta = a.beta;
  cfg.k = a.k;
  cfg.seed = g.seed;
  const auto trace = train_toy(inst, ToySoftmaxPolicy(support), cfg);
  std::string lines;
  for (const auto& s : trace.steps) {
    nlohmann::ordered_json j;
    j["step"] = s.step;
    j["loss"] = s.batch_loss;
    j["grad_norm2"] = s.grad_norm2;
    j["eval_loss"] = s.eval_loss;
    j["pairs"] = s.pairs;
    lines += j.dump() + "\n";
  }
  emit(g, lines);
  nlohmann::ordered_json summary;
  summary["support"] = support.size();
  summary["learning_rate"] = trace.learning_rate;
  summary["smoothness"] = trace.smoothness;
  summary["initial_eval_loss"] = trace.initial_eval_loss;
  summary["final_eval_loss"] = trace.final_eval_loss;
  summary["initial_optimal_mass"] = trace.initial_optimal_mass;
  summary["final_optimal_mass"] = trace.final_optimal_mass;
  (g.out.empty() ? std::cerr : std::cout) << summary.dump() << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::string suite = "all";
  std::vector<int> only;
  std::string inject;
  bool quick = false;
};

int cmd_bench(const Globals& g, const BenchArgs& a) {
  AcceptanceOptions opts;
  opts.seed = g.seed;
  if (a.inject == "skip-split") opts.repair.skip_split = true;
  else if (!a.inject.empty()) throw Error(ErrorCode::DomainError, "unknown fault '" + a.inject + "'");
  if (a.quick) {
    opts.fuzz_cases = 700;
    opts.decodes = 300;
    opts.mc_trials = 20'000;
    opts.adaptive_runs = 2'000;
    opts.gradient_configs = 5;
    opts.training_seeds = 5;
    opts.oracle_instances = 5;
    opts.idempotence_samples = 100;
  }
  const auto ids = a.only.empty() ? suite_criteria(a.suite) : a.only;
  AcceptanceRunner runner(opts);
  std::string out;
  bool all = true;
  for (int id : ids) {
    const auto r = runner.run(id);
    all = all && r.pass;
    const auto line = format_result(r) + "\n";
    std::cout << line << std::flush;
    out += line;
  }
  if (!g.out.empty()) emit(g, out);
  return all ? kExitOk : kExitAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cogent: grammar-constrained decoding, repair and sampling for combinatorial optimization"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Run seed");
  app.add_option("--threads", g.threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", g.out, "Output file (output directory for gen)");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate seeded instance files");
  gen_cmd->add_option("--kind", gen.kind, "tsp|op|cvrp|mis|mvc|pfsp|jssp")->required();
  gen_cmd->add_option("--size", gen.size, "Nodes, vertices or jobs")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--count", gen.count, "Number of instances")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--distribution", gen.distribution, "uniform|gm|er|ba|taillard");
  gen_cmd->add_option("--machines", gen.machines, "Machines for pfsp/jssp");

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Decode, repair and select; one JSON record per instance");
  solve_cmd->add_option("inputs", solve.inputs, "Instance files or directories")->required();
  solve_cmd->add_option("--policy", solve.policy, "uniform|heuristic|scripted:<file>");
  solve_cmd->add_option("--mode", solve.mode, "single|fixed|adaptive");
  solve_cmd->add_flag("--adaptive", [&](std::int64_t) { solve.mode = "adaptive"; }, "Same as --mode adaptive");
  solve_cmd->add_option("--n-samples", solve.n_samples, "Samples in fixed mode")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--temperature", solve.temperature, "Sampling temperature");
  solve_cmd->add_flag("--greedy", solve.greedy, "Argmax decoding");
  solve_cmd->add_option("--n-min", solve.n_min, "Adaptive minimum samples");
  solve_cmd->add_option("--n-max", solve.n_max, "Adaptive maximum samples");
  solve_cmd->add_option("--tau", solve.tau, "Adaptive confidence threshold");
  solve_cmd->add_option("--batch", solve.batch, "Samples drawn between stopping checks");
  solve_cmd->add_flag("--match-objective", solve.match_objective, "Count equal-objective samples as matches");
  solve_cmd->add_flag("--no-oracle", solve.no_oracle, "Skip brute-force reference values");
  solve_cmd->add_flag("--timing", solve.timing, "Record wall time per instance");
  solve_cmd->add_flag("--pretty", solve.pretty, "Human-readable table");

  std::string rep_inst, rep_sol;
  auto* repair_cmd = app.add_subcommand("repair", "Repair a solution text");
  repair_cmd->add_option("instance", rep_inst, "Instance file")->required();
  repair_cmd->add_option("solution", rep_sol, "Solution text file, - for stdin")->required();

  std::string ev_inst, ev_sol;
  std::optional<double> ev_ref;
  bool ev_oracle = false;
  auto* eval_cmd = app.add_subcommand("eval", "Check feasibility and objective of a solution text");
  eval_cmd->add_option("instance", ev_inst, "Instance file")->required();
  eval_cmd->add_option("solution", ev_sol, "Solution text file, - for stdin")->required();
  eval_cmd->add_option("--reference", ev_ref, "Reference objective for the gap");
  eval_cmd->add_flag("--oracle", ev_oracle, "Use the brute-force optimum as reference");

  std::string or_inst;
  auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force optimum in solution text format");
  oracle_cmd->add_option("instance", or_inst, "Instance file")->required();

  GrammarArgs gram;
  auto* gram_cmd = app.add_subcommand("grammar-check", "Print the grammar or check solution texts line by line");
  gram_cmd->add_option("text", gram.text_file, "File with one solution text per line, - for stdin");
  gram_cmd->add_option("--instance", gram.instance, "Take kind and size from an instance file");
  gram_cmd->add_option("--kind", gram.kind, "Problem kind");
  gram_cmd->add_option("--size", gram.size, "Index range size");
  gram_cmd->add_flag("--bnf", gram.bnf, "Print the specialized grammar");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-toy", "Preference training of a tabular softmax policy");
  train_cmd->add_option("--problem", train.problem, "Problem kind");
  train_cmd->add_option("--size", train.size, "Instance size")->check(CLI::PositiveNumber);
  train_cmd->add_option("--steps", train.steps, "Training steps")->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train.lr, "Learning rate (default 1/(L sqrt(T)))");
  train_cmd->add_option("--beta", train.beta, "Preference temperature");
  train_cmd->add_option("--k", train.k, "Samples per step")->check(CLI::PositiveNumber);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run acceptance suites");
  bench_cmd->add_option("suite", bench.suite, "feasibility|grammar|locality|lemma1|sampling|bopo-grad|oracle-equiv|all");
  bench_cmd->add_option("--only", bench.only, "Run only these criterion ids");
  bench_cmd->add_option("--inject", bench.inject, "Fault injection: skip-split");
  bench_cmd->add_flag("--quick", bench.quick, "Reduced sample counts for smoke runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    set_thread_count(g.threads);
    if (*gen_cmd) return cmd_gen(g, gen);
    if (*solve_cmd) return cmd_solve(g, solve);
    if (*repair_cmd) return cmd_repair(g, rep_inst, rep_sol);
    if (*eval_cmd) return cmd_eval(g, ev_inst, ev_sol, ev_ref, ev_oracle);
    if (*oracle_cmd) return cmd_oracle(g, or_inst);
    if (*gram_cmd) return cmd_grammar_check(g, gram);
    if (*train_cmd) return cmd_train_toy(g, train);
    if (*bench_cmd) return cmd_bench(g, bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
