#pragma once

#include "cogent/problem.hpp"

namespace cogent {

struct RepairOutcome {
  Solution repaired;
  bool modified = false;
  double distance_moved = 0.0;   // solution_distance(input, repaired)
  double input_magnitude = 0.0;  // violation_magnitude(input)
  double alpha_bound = 0.0;      // locality constant for the kind
};

/// Fault injection for mutation tests.
struct RepairOptions {
  bool skip_split = false;  // CVRP: leave overloaded routes unsplit
};

/// Locality constant: distance_moved <= alpha * input_magnitude.
/// 1 for TSP, PFSP, MIS, MVC; n for OP; 2n for CVRP (n = node count); 2 for JSSP.
double repair_alpha(const Instance& instance);

Tour repair_tsp(const Instance& instance, const Tour& tour);
RouteSet repair_cvrp(const Instance& instance, const RouteSet& routes, const RepairOptions& options = {});
PrizeRoute repair_op(const Instance& instance, const PrizeRoute& route);
VertexSet repair_mis(const Instance& instance, const VertexSet& set);
VertexSet repair_mvc(const Instance& instance, const VertexSet& set);
JobOrder repair_pfsp(const Instance& instance, const JobOrder& order);
MachineSchedules repair_jssp(const Instance& instance, const MachineSchedules& schedules);

/// Dispatches on the instance kind and fills in the outcome metrics.
RepairOutcome repair(const Instance& instance, const Solution& solution, const RepairOptions& options = {});

}  // namespace cogent
