#pragma once

#include <vector>

#include "cogent/problem.hpp"

namespace cogent {

/// Makes every machine sequence a permutation of jobs 1..n: drops sequences beyond the
/// machine count, pads missing ones, keeps first occurrences of in-range jobs and appends
/// missing jobs in ascending order.
std::vector<std::vector<int>> jssp_permutation_repair(const JsspData& data,
                                                      const std::vector<std::vector<int>>& machines);

struct DispatchResult {
  std::vector<std::vector<int>> machine_order;
  /// Operations taken out of machine-sequence order to break a precedence deadlock.
  int forced_picks = 0;
};

/// List dispatch over permutation machine sequences. Follows each machine's sequence
/// whenever the head job's next operation is on that machine; on deadlock takes the
/// available operation closest to its machine head. forced_picks == 0 iff the
/// disjunctive graph of the input is acyclic, and then machine_order equals the input.
DispatchResult jssp_dispatch(const JsspData& data, const std::vector<std::vector<int>>& machines);

/// Semi-active schedule makespan. Throws InvalidSolution unless every machine sequence is
/// a permutation of the jobs, CyclicSchedule when the disjunctive graph has a cycle.
double jssp_makespan(const JsspData& data, const MachineSchedules& schedules);

bool jssp_is_acyclic(const JsspData& data, const std::vector<std::vector<int>>& machines);

}  // namespace cogent
