#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cogent/decoder.hpp"
#include "cogent/parallel.hpp"
#include "cogent/problem.hpp"
#include "cogent/sampler.hpp"

namespace cogent {

enum class SolveMode { Single, Fixed, Adaptive };
/// "single", "fixed", "adaptive". Throws DomainError.
SolveMode parse_solve_mode(std::string_view name);
std::string_view solve_mode_name(SolveMode mode);

struct SolveOptions {
  std::string policy = "heuristic";
  SolveMode mode = SolveMode::Single;
  int n_samples = 8;  // fixed mode
  DecodeConfig decode;
  SamplerConfig sampler;
  /// Compute the brute-force optimum for instances within the oracle caps.
  bool with_oracle = true;
  /// Record wall time per instance (makes reports differ between runs).
  bool timing = false;
  /// Worker pool over instances.
  Exec exec = Exec::Parallel;
};

struct RunRecord {
  std::string id;
  ProblemKind kind = ProblemKind::TSP;
  int size = 0;
  int samples_used = 0;
  bool early_stop = false;
  int raw_feasible = 0;        // samples feasible before repair
  bool repair_invoked = false; // some sample was changed by repair
  bool feasible = false;       // best solution after repair
  double objective = 0.0;
  std::string solution;        // grammar text of the best solution
  std::optional<double> oracle;
  std::optional<double> gap;
  /// Upper bound on objective(best) in min-sense form: min over samples of
  /// extended_objective(raw) + L_f * alpha * v(raw).
  double bound = 0.0;
  std::optional<double> seconds;
  std::optional<std::string> error;
};

struct RunAggregates {
  int instances = 0;
  int errors = 0;
  double feasibility_pre = 0.0;   // percent of raw samples feasible
  double feasibility_post = 0.0;  // percent of best solutions feasible
  std::optional<double> mean_gap;
  double mean_samples = 0.0;
};

struct RunReport {
  std::vector<RunRecord> records;  // ordered by instance id
  RunAggregates aggregates;
};

/// Objective extended to infeasible payloads, in min-sense form: the ordinary formula
/// applied to the raw payload (duplicates allowed); 0 for job shop schedules that cannot
/// be evaluated.
double extended_objective(const Instance& instance, const Solution& solution);

struct InstanceRun {
  RunRecord record;
  Solution best;
  SampleTrace trace;
};

/// Decode, repair and select for one instance. Errors are captured in record.error.
InstanceRun solve_instance(const Instance& instance, const SolveOptions& options);
RunReport run_pipeline(const std::vector<Instance>& instances, const SolveOptions& options);

nlohmann::ordered_json record_to_json(const RunRecord& record);
nlohmann::ordered_json aggregates_to_json(const RunAggregates& aggregates);
/// One JSON record per line followed by one aggregate line.
std::string report_to_jsonl(const RunReport& report);
/// Fixed-width table for humans.
std::string report_to_table(const RunReport& report);

}  // namespace cogent
