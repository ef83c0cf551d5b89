#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "cogent/problem.hpp"

namespace cogent {

enum class Distribution { Uniform, GaussianMixture, ErdosRenyi, BarabasiAlbert, Taillard };

/// "uniform", "gm", "er", "ba", "taillard" (case-insensitive). Throws UnsupportedDistribution.
Distribution parse_distribution(std::string_view name);
std::string_view distribution_name(Distribution dist);
/// uniform for routing, er for graphs, taillard for scheduling.
Distribution default_distribution(ProblemKind kind);
/// Throws UnsupportedDistribution when the distribution does not apply to the kind.
void check_distribution(ProblemKind kind, Distribution dist);

struct GenerateOptions {
  /// Machine count for PFSP and JSSP; 0 selects 5 for PFSP and 3 for JSSP.
  int machines = 0;
};

/// Seeded instance of the given size (nodes, vertices or jobs). Routing coordinates lie in
/// the unit square; OP prizes in (0, 1]; CVRP demands are integers 1..9; ER uses edge
/// probability 0.15; BA attaches each new vertex to 3 existing ones; scheduling durations
/// are integers 1..99.
Instance generate_instance(ProblemKind kind, int size, Distribution dist, std::uint64_t seed,
                           const GenerateOptions& options = {});

/// OP budget and CVRP capacity used for a node count.
double op_budget_for(int nodes);
double cvrp_capacity_for(int nodes);

}  // namespace cogent
