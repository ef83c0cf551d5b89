#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogent/error.hpp"
#include "cogent/fuzz.hpp"
#include "cogent/generate.hpp"
#include "cogent/oracle.hpp"
#include "cogent/repair.hpp"
#include "cogent/schedule.hpp"
#include "oracles.hpp"

using namespace cogent;

namespace {

Instance square() { return make_tsp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

// Cheapest insertion of every missing node in ascending order, starting from the lowest
// node when the tour is empty.
std::vector<int> greedy_insertion(const std::vector<Point>& pts, std::vector<int> tour) {
  for (int v = 0; v < static_cast<int>(pts.size()); ++v) {
    if (std::find(tour.begin(), tour.end(), v) != tour.end()) continue;
    if (tour.empty()) {
      tour.push_back(v);
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> pick;
    for (std::size_t pos = 1; pos <= tour.size(); ++pos) {
      auto t = tour;
      t.insert(t.begin() + static_cast<long>(pos), v);
      const double len = testing_oracles::tour_length(pts, t);
      if (len < best - 1e-12) {
        best = len;
        pick = t;
      }
    }
    tour = pick;
  }
  return tour;
}

double route_len(const std::vector<Point>& pts, const std::vector<int>& r) {
  std::vector<int> closed{0};
  closed.insert(closed.end(), r.begin(), r.end());
  return testing_oracles::tour_length(pts, closed);
}

bool has_cycle_oracle(const JsspData& d, const std::vector<std::vector<int>>& machines) {
  return !testing_oracles::job_shop_simulated_makespan(d, machines).has_value();
}

}  // namespace

TEST(RepairTsp, FeasibleUnchanged) {
  const auto out = repair(square(), Tour{{0, 1, 2, 3}});
  EXPECT_FALSE(out.modified);
  EXPECT_EQ(out.repaired, Solution(Tour{{0, 1, 2, 3}}));
}

TEST(RepairTsp, DedupeAndInsert) {
  const auto inst = square();
  const auto out = repair(inst, Tour{{0, 2, 2, 1}});
  EXPECT_EQ(out.repaired, Solution(Tour{{0, 3, 2, 1}}));
  EXPECT_DOUBLE_EQ(objective(inst, out.repaired), 4.0);
  EXPECT_DOUBLE_EQ(brute_force(inst).value, 4.0);
  EXPECT_EQ(out.input_magnitude, 2.0);
  EXPECT_LE(out.distance_moved, out.alpha_bound * out.input_magnitude);
}

TEST(RepairTsp, EmptyInputMatchesGreedyInsertion) {
  for (int seed = 0; seed < 30; ++seed) {
    const auto inst = generate_instance(ProblemKind::TSP, 9, Distribution::Uniform, seed);
    const auto out = repair_tsp(inst, Tour{});
    EXPECT_EQ(out.nodes, greedy_insertion(inst.as<TspData>().coords, {}));
    EXPECT_TRUE(check_feasibility(inst, out).feasible);
  }
}

TEST(RepairTsp, PartialInputMatchesGreedyInsertion) {
  Rng rng = child_rng(7, 0);
  for (int seed = 0; seed < 30; ++seed) {
    const auto inst = generate_instance(ProblemKind::TSP, 8, Distribution::Uniform, seed);
    std::vector<int> nodes{0, 1, 2, 3, 4, 5, 6, 7};
    shuffle(nodes, rng);
    nodes.resize(4);
    EXPECT_EQ(repair_tsp(inst, Tour{nodes}).nodes, greedy_insertion(inst.as<TspData>().coords, nodes));
  }
}

TEST(RepairCvrp, FeasibleUnchanged) {
  const auto inst = make_cvrp({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, {0, 3, 3, 3}, 6);
  const auto out = repair(inst, RouteSet{{{1, 3}, {2}}});
  EXPECT_FALSE(out.modified);
}

TEST(RepairCvrp, SplitsOverload) {
  const auto inst = make_cvrp({{0, 0}, {1, 0}, {0, 1}}, {0, 6, 6}, 10);
  const auto out = repair(inst, RouteSet{{{1, 2}}});
  EXPECT_TRUE(same_solution(out.repaired, RouteSet{{{1}, {2}}}));
  RepairOptions broken;
  broken.skip_split = true;
  EXPECT_FALSE(check_feasibility(inst, repair(inst, RouteSet{{{1, 2}}}, broken).repaired).feasible);
}

TEST(RepairCvrp, MixedDefectsLocal) {
  const auto inst = make_cvrp({{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}}, {0, 4, 4, 4, 4, 4}, 9);
  const RouteSet input{{{1, 2, 3, 1}, {2, 7}}};
  const auto out = repair(inst, input);
  EXPECT_TRUE(check_feasibility(inst, out.repaired).feasible);
  EXPECT_LE(out.distance_moved, out.alpha_bound * out.input_magnitude);
  EXPECT_DOUBLE_EQ(out.alpha_bound, 12.0);
}

TEST(RepairOp, WithinBudgetUnchanged) {
  const auto inst = make_op({{0, 0}, {0.1, 0}, {0, 0.1}}, {0, 1, 1}, 5.0);
  EXPECT_FALSE(repair(inst, PrizeRoute{{1, 2}}).modified);
}

TEST(RepairOp, TinyBudgetEmptiesRoute) {
  const auto inst = make_op({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1}, 0.5);
  const auto out = repair_op(inst, PrizeRoute{{1, 2}});
  EXPECT_TRUE(out.nodes.empty());
  EXPECT_EQ(objective(inst, out), 0.0);
}

TEST(RepairOp, RemovalSequenceMatchesRecomputedRatios) {
  const auto inst = make_op({{0, 0}, {1, 0}, {1, 1}, {0, 2}}, {0, 0.3, 0.9, 0.5}, 3.0);
  const auto& d = inst.as<OpData>();
  std::vector<int> r{1, 2, 3};
  // Oracle: contribution of a node = route length minus length without it.
  while (!r.empty() && route_len(d.coords, r) > d.budget) {
    std::size_t worst = 0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) {
      auto without = r;
      without.erase(without.begin() + static_cast<long>(i));
      const double contrib = route_len(d.coords, r) - route_len(d.coords, without);
      const double ratio = contrib > 1e-12 ? d.prizes[r[i]] / contrib : std::numeric_limits<double>::infinity();
      if (ratio < worst_ratio) {
        worst_ratio = ratio;
        worst = i;
      }
    }
    r.erase(r.begin() + static_cast<long>(worst));
  }
  EXPECT_EQ(repair_op(inst, PrizeRoute{{1, 2, 3}}).nodes, r);
  EXPECT_TRUE(check_feasibility(inst, PrizeRoute{r}).feasible);
}

TEST(RepairMis, Examples) {
  const auto path = make_graph(ProblemKind::MIS, 3, {{0, 1}, {1, 2}});
  EXPECT_FALSE(repair(path, VertexSet{{0, 2}}).modified);
  EXPECT_EQ(repair_mis(path, VertexSet{{0, 1, 2}}).vertices, (std::vector<int>{0, 2}));
  EXPECT_EQ(brute_force(path).value, 2.0);
  const auto k3 = make_graph(ProblemKind::MIS, 3, {{0, 1}, {0, 2}, {1, 2}});
  const auto out = repair_mis(k3, VertexSet{{0, 1, 2}});
  EXPECT_EQ(out.vertices.size(), 1u);
  EXPECT_TRUE(check_feasibility(k3, out).feasible);
}

TEST(RepairMvc, Examples) {
  const auto path = make_graph(ProblemKind::MVC, 3, {{0, 1}, {1, 2}});
  EXPECT_FALSE(repair(path, VertexSet{{1}}).modified);
  EXPECT_EQ(repair_mvc(path, VertexSet{}).vertices, (std::vector<int>{1}));
  EXPECT_EQ(brute_force(path).value, 1.0);
  const auto star = make_graph(ProblemKind::MVC, 5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  EXPECT_EQ(repair_mvc(star, VertexSet{}).vertices, (std::vector<int>{0}));
}

TEST(RepairPfsp, Examples) {
  const auto inst = make_pfsp({{3, 2}, {1, 4}});
  EXPECT_FALSE(repair(inst, JobOrder{{1, 2}}).modified);
  // Insertion positions: [2, 1] -> 7, [1, 2] -> 9.
  const auto out = repair_pfsp(inst, JobOrder{{1}});
  EXPECT_EQ(out.jobs, (std::vector<int>{2, 1}));
  EXPECT_DOUBLE_EQ(testing_oracles::flow_shop_event_makespan(inst.as<PfspData>(), out.jobs), 7.0);
  const auto three = make_pfsp({{1, 1}, {2, 2}, {3, 3}});
  const auto dedup = repair_pfsp(three, JobOrder{{2, 2, 1, 3}});
  EXPECT_EQ(dedup.jobs.size(), 3u);
  EXPECT_EQ(dedup.jobs[0], 2);
}

TEST(RepairJssp, ConsistentUnchanged) {
  const auto inst = make_jssp({{{0, 2}, {1, 3}}, {{0, 1}, {1, 1}}});
  EXPECT_FALSE(repair(inst, MachineSchedules{{{1, 2}, {1, 2}}}).modified);
}

TEST(RepairJssp, BreaksCycle) {
  // Job 1: M0 then M1. Job 2: M1 then M0. M0 runs 2 before 1 and M1 runs 1 before 2.
  const auto inst = make_jssp({{{0, 2}, {1, 3}}, {{1, 1}, {0, 1}}});
  const auto& d = inst.as<JsspData>();
  const std::vector<std::vector<int>> cyclic{{2, 1}, {1, 2}};
  ASSERT_TRUE(has_cycle_oracle(d, cyclic));
  EXPECT_THROW(objective(inst, MachineSchedules{cyclic}), Error);
  const auto out = repair_jssp(inst, MachineSchedules{cyclic});
  EXPECT_FALSE(has_cycle_oracle(d, out.machines));
  EXPECT_NO_THROW(objective(inst, out));
  EXPECT_LE(solution_distance(MachineSchedules{cyclic}, out), 2.0 * violation_magnitude(inst, MachineSchedules{cyclic}));
}

TEST(RepairJssp, MissingJobAppended) {
  const auto inst = make_jssp({{{0, 2}, {1, 3}}, {{0, 1}, {1, 1}}});
  const auto out = repair_jssp(inst, MachineSchedules{{{1}, {1, 2}}});
  EXPECT_EQ(out.machines[0], (std::vector<int>{1, 2}));
  EXPECT_TRUE(check_feasibility(inst, out).feasible);
}

TEST(Repair, IdempotentAndLocalOnRandomInputs) {
  Rng rng = child_rng(12, 0);
  for (auto kind : kAllKinds) {
    for (int i = 0; i < 30; ++i) {
      const auto inst = generate_instance(kind, 6, default_distribution(kind), 300 + i);
      const auto feasible = random_feasible(inst, rng);
      const auto keep = repair(inst, feasible);
      EXPECT_FALSE(keep.modified) << kind_name(kind);
      EXPECT_EQ(keep.repaired, feasible);
      const auto noisy = fuzz_solution(inst, FuzzFamily::Random, rng);
      const auto once = repair(inst, noisy);
      EXPECT_TRUE(check_feasibility(inst, once.repaired).feasible);
      EXPECT_LE(once.distance_moved, once.alpha_bound * once.input_magnitude + 1e-9);
      EXPECT_FALSE(repair(inst, once.repaired).modified);
    }
  }
}

TEST(Repair, KindMismatchThrows) { EXPECT_THROW(repair(square(), VertexSet{{0}}), Error); }

TEST(Repair, AlphaConstants) {
  EXPECT_EQ(repair_alpha(square()), 1.0);
  EXPECT_EQ(repair_alpha(make_op({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1}, 1)), 3.0);
  EXPECT_EQ(repair_alpha(make_cvrp({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1}, 5)), 6.0);
  EXPECT_EQ(repair_alpha(make_jssp({{{0, 1}}})), 2.0);
}
