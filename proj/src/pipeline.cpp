#include "cogent/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "cogent/error.hpp"
#include "cogent/oracle.hpp"
#include "cogent/policies.hpp"
#include "cogent/repair.hpp"
#include "cogent/solution_text.hpp"

namespace cogent {

SolveMode parse_solve_mode(std::string_view name) {
  if (name == "single") return SolveMode::Single;
  if (name == "fixed") return SolveMode::Fixed;
  if (name == "adaptive") return SolveMode::Adaptive;
  throw Error(ErrorCode::DomainError, "unknown sampling mode '" + std::string(name) + "'");
}

std::string_view solve_mode_name(SolveMode mode) {
  switch (mode) {
    case SolveMode::Single: return "single";
    case SolveMode::Fixed: return "fixed";
    case SolveMode::Adaptive: return "adaptive";
  }
  return "unknown";
}

double extended_objective(const Instance& instance, const Solution& solution) {
  try {
    return min_sense_objective(instance, solution);
  } catch (const Error& e) {
    if (instance.kind == ProblemKind::JSSP &&
        (e.code() == ErrorCode::CyclicSchedule || e.code() == ErrorCode::InvalidSolution)) {
      return 0.0;
    }
    throw;
  }
}

InstanceRun solve_instance(const Instance& instance, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  InstanceRun run;
  auto& rec = run.record;
  rec.id = instance.id;
  rec.kind = instance.kind;
  rec.size = instance.size();
  try {
    const auto policy = make_policy(options.policy, instance);
    std::pair<Solution, SampleTrace> result;
    switch (options.mode) {
      case SolveMode::Single: result = best_of_n(instance, *policy, options.decode, 1); break;
      case SolveMode::Fixed: result = best_of_n(instance, *policy, options.decode, options.n_samples, options.sampler.exec); break;
      case SolveMode::Adaptive: result = adaptive_best_of_n(instance, *policy, options.decode, options.sampler); break;
    }
    run.best = std::move(result.first);
    run.trace = std::move(result.second);
    rec.samples_used = run.trace.samples_used;
    rec.early_stop = run.trace.terminated_early;
    const double lf = objective_lipschitz(instance);
    const double alpha = repair_alpha(instance);
    rec.bound = std::numeric_limits<double>::infinity();
    for (const auto& s : run.trace.samples) {
      rec.raw_feasible += s.feasible_before;
      rec.repair_invoked = rec.repair_invoked || !(s.raw == s.repaired);
      rec.bound = std::min(rec.bound, extended_objective(instance, s.raw) + lf * alpha * s.magnitude);
    }
    rec.feasible = check_feasibility(instance, run.best).feasible;
    rec.objective = objective(instance, run.best);
    rec.solution = format_solution(instance.kind, run.best, rec.objective);
    if (options.with_oracle && within_oracle_caps(instance)) {
      rec.oracle = brute_force(instance).value;
      try {
        rec.gap = optimality_gap(rec.objective, *rec.oracle, sense_of(instance.kind));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ZeroReference) throw;
      }
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  if (options.timing) {
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return run;
}

RunReport run_pipeline(const std::vector<Instance>& instances, const SolveOptions& options) {
  RunReport report;
  report.records.resize(instances.size());
  SolveOptions inner = options;
  if (options.exec == Exec::Parallel) inner.sampler.exec = Exec::Serial;
  parallel_for(instances.size(), options.exec,
               [&](std::size_t i) { report.records[i] = solve_instance(instances[i], inner).record; });
  std::stable_sort(report.records.begin(), report.records.end(),
                   [](const RunRecord& a, const RunRecord& b) { return a.id < b.id; });
  auto& agg = report.aggregates;
  agg.instances = static_cast<int>(report.records.size());
  int samples = 0, raw_ok = 0, post_ok = 0, gaps = 0;
  double gap_sum = 0.0;
  for (const auto& r : report.records) {
    if (r.error) {
      ++agg.errors;
      continue;
    }
    samples += r.samples_used;
    raw_ok += r.raw_feasible;
    post_ok += r.feasible;
    if (r.gap) {
      gap_sum += *r.gap;
      ++gaps;
    }
  }
  const int ok = agg.instances - agg.errors;
  if (ok > 0) {
    agg.feasibility_post = 100.0 * post_ok / ok;
    agg.mean_samples = static_cast<double>(samples) / ok;
  }
  if (samples > 0) agg.feasibility_pre = 100.0 * raw_ok / samples;
  if (gaps > 0) agg.mean_gap = gap_sum / gaps;
  return report;
}

nlohmann::ordered_json record_to_json(const RunRecord& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["kind"] = std::string(kind_name(r.kind));
  j["size"] = r.size;
  if (r.error) {
    j["error"] = *r.error;
  } else {
    j["samples_used"] = r.samples_used;
    j["early_stop"] = r.early_stop;
    j["raw_feasible"] = r.raw_feasible;
    j["repair_invoked"] = r.repair_invoked;
    j["feasible"] = r.feasible;
    j["objective"] = r.objective;
    j["solution"] = r.solution;
    j["oracle"] = r.oracle ? nlohmann::ordered_json(*r.oracle) : nlohmann::ordered_json();
    j["gap"] = r.gap ? nlohmann::ordered_json(*r.gap) : nlohmann::ordered_json();
    j["bound"] = r.bound;
  }
  if (r.seconds) j["seconds"] = *r.seconds;
  return j;
}

nlohmann::ordered_json aggregates_to_json(const RunAggregates& a) {
  nlohmann::ordered_json j;
  j["aggregate"] = true;
  j["instances"] = a.instances;
  j["errors"] = a.errors;
  j["feasibility_pre"] = a.feasibility_pre;
  j["feasibility_post"] = a.feasibility_post;
  j["mean_gap"] = a.mean_gap ? nlohmann::ordered_json(*a.mean_gap) : nlohmann::ordered_json();
  j["mean_samples"] = a.mean_samples;
  return j;
}

std::string report_to_jsonl(const RunReport& report) {
  std::string out;
  for (const auto& r : report.records) out += record_to_json(r).dump() + "\n";
  out += aggregates_to_json(report.aggregates).dump() + "\n";
  return out;
}

std::string report_to_table(const RunReport& report) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-24s %-5s %5s %7s %5s %12s %12s %9s\n", "id", "kind", "size", "samples", "feas",
                "objective", "oracle", "gap%");
  os << line;
  for (const auto& r : report.records) {
    if (r.error) {
      os << r.id << "  error: " << *r.error << "\n";
      continue;
    }
    std::snprintf(line, sizeof line, "%-24s %-5s %5d %7d %5s %12.4f %12s %9s\n", r.id.c_str(),
                  std::string(kind_name(r.kind)).c_str(), r.size, r.samples_used, r.feasible ? "yes" : "NO", r.objective,
                  r.oracle ? std::to_string(*r.oracle).c_str() : "-",
                  r.gap ? std::to_string(100.0 * *r.gap).c_str() : "-");
    os << line;
  }
  const auto& a = report.aggregates;
  std::snprintf(line, sizeof line, "M_f pre %.2f%%  M_f post %.2f%%  mean samples %.2f  mean gap %s  errors %d\n",
                a.feasibility_pre, a.feasibility_post, a.mean_samples,
                a.mean_gap ? (std::to_string(100.0 * *a.mean_gap) + "%").c_str() : "-", a.errors);
  os << line;
  return os.str();
}

}  // namespace cogent
