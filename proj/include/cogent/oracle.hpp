#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "cogent/parallel.hpp"
#include "cogent/problem.hpp"
#include "cogent/random.hpp"

namespace cogent {

struct OracleResult {
  Solution solution;
  double value = 0.0;
  std::uint64_t explored = 0;  // configurations evaluated
  double seconds = 0.0;
};

/// Whether brute_force accepts the instance: TSP n <= 9, OP n <= 12, CVRP n <= 7,
/// MIS/MVC |V| <= 20, PFSP n <= 8, JSSP (n!)^m <= 10^6 machine-sequence tuples.
bool within_oracle_caps(const Instance& instance);

/// Exact optimum by exhaustive search. Ties keep the first solution in enumeration order,
/// so serial and parallel runs agree. Throws TooLarge outside the caps.
OracleResult brute_force(const Instance& instance, Exec exec = Exec::Serial);

/// Greedy nearest-unvisited tour; ties go to the lowest index.
Tour nearest_neighbor_tsp(const Instance& instance, int start = 0);

/// Feasible solutions in enumeration order (lexicographic sequences, ascending subset
/// masks, routes grown customer by customer), truncated at cap. Throws TooLarge outside
/// the caps.
std::vector<Solution> enumerate_feasible(const Instance& instance,
                                         std::size_t cap = std::numeric_limits<std::size_t>::max());

/// A random feasible solution built constructively (never through repair).
Solution random_feasible(const Instance& instance, Rng& rng);

}  // namespace cogent
