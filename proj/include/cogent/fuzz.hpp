#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cogent/parallel.hpp"
#include "cogent/problem.hpp"
#include "cogent/random.hpp"
#include "cogent/repair.hpp"

namespace cogent {

/// Adversarial input families for repair.
enum class FuzzFamily { Random, Truncated, Duplicated, OutOfRangeCleaned, Overloaded, Empty, Feasible };

inline constexpr int kFuzzFamilyCount = 7;
std::string_view family_name(FuzzFamily family);

/// An in-range (possibly infeasible) payload of the given family for the instance.
Solution fuzz_solution(const Instance& instance, FuzzFamily family, Rng& rng);

struct FuzzCase {
  std::size_t instance = 0;  // index into FuzzCorpus::instances
  FuzzFamily family = FuzzFamily::Random;
  Solution input;
};

struct FuzzCorpus {
  ProblemKind kind = ProblemKind::TSP;
  std::vector<Instance> instances;
  std::vector<FuzzCase> cases;
};

/// Seeded instance of varied size for work item `index`: routing up to 15 nodes (CVRP 12),
/// graphs up to 20 vertices, flow shop up to 10 jobs, job shop up to 6 jobs x 4 machines.
Instance fuzz_instance(ProblemKind kind, std::size_t index, std::uint64_t seed);

/// `cases` inputs spread round-robin over `instance_count` seeded instances of varied size,
/// with families cycling in order.
FuzzCorpus make_fuzz_corpus(ProblemKind kind, int cases, std::uint64_t seed, int instance_count = 50);

struct FuzzSummary {
  std::size_t cases = 0;
  std::size_t infeasible_after = 0;      // repaired output fails check_feasibility
  std::size_t magnitude_mismatch = 0;    // (v == 0) disagrees with feasibility, input or output
  std::size_t not_idempotent = 0;        // feasible input changed by repair
  std::size_t locality_violations = 0;   // distance_moved > alpha * v
  std::size_t quality_violations = 0;    // TSP: f(R(x)) - f(x) > 2 sqrt(2) |missing|
  std::size_t double_repair_mismatch = 0;
  std::size_t errors = 0;                // exceptions thrown by repair
  double max_locality_ratio = 0.0;       // max distance_moved / v over infeasible inputs
  std::string first_failure;

  bool feasibility_ok() const { return cases > 0 && infeasible_after == 0 && errors == 0; }
  bool locality_ok() const { return cases > 0 && locality_violations == 0 && errors == 0; }
};

FuzzSummary run_fuzz(const FuzzCorpus& corpus, Exec exec = Exec::Parallel, const RepairOptions& options = {});

}  // namespace cogent
