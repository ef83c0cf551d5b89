#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cogent/fuzz.hpp"
#include "cogent/parallel.hpp"
#include "cogent/repair.hpp"

namespace cogent {

inline constexpr int kCriterionCount = 12;

struct AcceptanceOptions {
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
  int fuzz_cases = 10'000;        // per problem kind
  int decodes = 10'000;           // per problem kind
  int mc_trials = 100'000;
  int adaptive_runs = 10'000;
  int gradient_configs = 20;
  int training_seeds = 20;
  int training_steps = 400;
  int oracle_instances = 50;      // per problem kind
  int idempotence_samples = 1'000;
  /// Fault injection for mutation runs.
  RepairOptions repair;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string_view criterion_name(int id);
/// Criteria run by a suite: feasibility, grammar, locality, lemma1, sampling, bopo-grad,
/// oracle-equiv, all. Throws DomainError for other names.
std::vector<int> suite_criteria(std::string_view suite);
std::vector<std::string> suite_names();

class AcceptanceRunner {
 public:
  explicit AcceptanceRunner(AcceptanceOptions options) : options_(std::move(options)) {}
  /// Throws DomainError for ids outside 1..12.
  CriterionResult run(int id);

 private:
  const FuzzSummary& fuzz(ProblemKind kind);
  CriterionResult fuzz_feasibility();
  CriterionResult format_validity();
  CriterionResult idempotence();
  CriterionResult locality();
  CriterionResult tsp_quality();
  CriterionResult consistency_expectation();
  CriterionResult min_gap_decay();
  CriterionResult rejection_count();
  CriterionResult adaptive_samples();
  CriterionResult preference_gradients();
  CriterionResult training_trend();
  CriterionResult oracle_equivalence();

  AcceptanceOptions options_;
  std::map<ProblemKind, FuzzSummary> fuzz_cache_;
};

/// "PASS  4 repair-locality  <detail>" (FAIL likewise).
std::string format_result(const CriterionResult& result);

}  // namespace cogent
