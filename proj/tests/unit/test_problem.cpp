#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cogent/error.hpp"
#include "cogent/generate.hpp"
#include "cogent/problem.hpp"
#include "cogent/random.hpp"
#include "cogent/schedule.hpp"
#include "oracles.hpp"

using namespace cogent;

namespace {

Instance square() { return make_tsp({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
Instance path3(ProblemKind kind) { return make_graph(kind, 3, {{0, 1}, {1, 2}}); }

template <typename Fn>
void expect_code(ErrorCode code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Objective, SquarePerimeter) { EXPECT_DOUBLE_EQ(objective(square(), Tour{{0, 1, 2, 3}}), 4.0); }

TEST(Objective, EmptyIndependentSetIsZero) { EXPECT_EQ(objective(path3(ProblemKind::MIS), VertexSet{}), 0.0); }

TEST(Objective, FlowShopTwoByTwo) {
  // Rows are jobs. Hand unrolled: [1,2] -> M1 3,4; M2 5,9. [2,1] -> M1 1,4; M2 5,7.
  const auto inst = make_pfsp({{3, 2}, {1, 4}});
  EXPECT_DOUBLE_EQ(objective(inst, JobOrder{{1, 2}}), 9.0);
  EXPECT_DOUBLE_EQ(objective(inst, JobOrder{{2, 1}}), 7.0);
  const auto& d = inst.as<PfspData>();
  EXPECT_DOUBLE_EQ(testing_oracles::flow_shop_event_makespan(d, {1, 2}), 9.0);
  EXPECT_DOUBLE_EQ(testing_oracles::flow_shop_event_makespan(d, {2, 1}), 7.0);
}

TEST(Objective, FlowShopMatchesEventSimulatorOnSmallInstances) {
  Rng rng = child_rng(3, 0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 6;
    GenerateOptions opts;
    opts.machines = 1 + trial % 4;
    const auto inst = generate_instance(ProblemKind::PFSP, n, Distribution::Taillard, 100 + trial, opts);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    shuffle(order, rng);
    EXPECT_DOUBLE_EQ(objective(inst, JobOrder{order}),
                     testing_oracles::flow_shop_event_makespan(inst.as<PfspData>(), order));
  }
}

TEST(Objective, JobShopMatchesSimulator) {
  Rng rng = child_rng(4, 0);
  int acyclic = 0, cyclic = 0;
  for (int trial = 0; trial < 200; ++trial) {
    GenerateOptions opts;
    opts.machines = 2 + trial % 3;
    const auto inst = generate_instance(ProblemKind::JSSP, 2 + trial % 3, Distribution::Taillard, trial, opts);
    const auto& d = inst.as<JsspData>();
    MachineSchedules ms;
    for (int k = 0; k < d.machines; ++k) {
      std::vector<int> seq(d.jobs);
      std::iota(seq.begin(), seq.end(), 1);
      shuffle(seq, rng);
      ms.machines.push_back(seq);
    }
    const auto sim = testing_oracles::job_shop_simulated_makespan(d, ms.machines);
    if (sim) {
      ++acyclic;
      EXPECT_DOUBLE_EQ(objective(inst, ms), *sim);
      EXPECT_TRUE(check_feasibility(inst, ms).feasible);
    } else {
      ++cyclic;
      expect_code(ErrorCode::CyclicSchedule, [&] { objective(inst, ms); });
      EXPECT_FALSE(check_feasibility(inst, ms).feasible);
    }
  }
  EXPECT_GT(acyclic, 0);
  EXPECT_GT(cyclic, 0);
}

TEST(Objective, JobShopTopologicalSequencesNeverCyclic) {
  // Machine sequences read off a global job order built from any topological order of
  // the job routings: list all operations job-major and stable-sort by a random start rank.
  Rng rng = child_rng(5, 0);
  for (int trial = 0; trial < 100; ++trial) {
    GenerateOptions opts;
    opts.machines = 3;
    const auto inst = generate_instance(ProblemKind::JSSP, 4, Distribution::Taillard, 500 + trial, opts);
    const auto& d = inst.as<JsspData>();
    // Random topological order: repeatedly take the next operation of a random unfinished job.
    std::vector<int> next(d.jobs, 0);
    MachineSchedules ms;
    ms.machines.assign(d.machines, {});
    for (int left = d.jobs * d.machines; left > 0; --left) {
      std::vector<int> open;
      for (int j = 0; j < d.jobs; ++j)
        if (next[j] < d.machines) open.push_back(j);
      const int j = open[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(open.size()) - 1))];
      ms.machines[d.ops[j][next[j]].machine].push_back(j + 1);
      ++next[j];
    }
    EXPECT_NO_THROW(objective(inst, ms));
  }
}

TEST(Objective, Errors) {
  expect_code(ErrorCode::IndexOutOfRange, [] { objective(square(), Tour{{0, 1, 2, 7}}); });
  expect_code(ErrorCode::KindMismatch, [] { objective(square(), VertexSet{{0}}); });
}

TEST(Feasibility, ValidTour) {
  const auto r = check_feasibility(square(), Tour{{0, 1, 2, 3}});
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.magnitude, 0.0);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Feasibility, MisConflictEdges) {
  const auto r = check_feasibility(path3(ProblemKind::MIS), VertexSet{{0, 1, 2}});
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.magnitude, 2.0);
}

TEST(Feasibility, CvrpOverflow) {
  const auto inst = make_cvrp({{0, 0}, {1, 0}, {0, 1}}, {0, 6, 6}, 10);
  const auto r = check_feasibility(inst, RouteSet{{{1, 2}}});
  EXPECT_FALSE(r.feasible);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].constraint, "capacity");
  EXPECT_DOUBLE_EQ(route_load(inst.as<CvrpData>(), std::vector<int>{1, 2}) - 10.0, 2.0);
  // Overflow in capacity units, rounded up.
  EXPECT_EQ(r.magnitude, 1.0);
}

TEST(Feasibility, OpBudget) {
  const auto inst = make_op({{0, 0}, {0.5, 0}, {0, 0.5}}, {0, 1, 1}, 1.0);
  EXPECT_TRUE(check_feasibility(inst, PrizeRoute{{1}}).feasible);
  const auto r = check_feasibility(inst, PrizeRoute{{1, 2}});
  EXPECT_FALSE(r.feasible);
  EXPECT_GT(r.magnitude, 0.0);
  EXPECT_FALSE(check_feasibility(inst, PrizeRoute{{1, 1}}).feasible);
}

TEST(Magnitude, TourDuplicatesPlusMissing) { EXPECT_EQ(violation_magnitude(square(), Tour{{0, 2, 2, 1}}), 2.0); }

TEST(Magnitude, MvcUncoveredEdges) { EXPECT_EQ(violation_magnitude(path3(ProblemKind::MVC), VertexSet{}), 2.0); }

TEST(Magnitude, ZeroIffFeasibleOnRandomPayloads) {
  Rng rng = child_rng(8, 0);
  for (auto kind : kAllKinds) {
    for (int i = 0; i < 40; ++i) {
      const auto inst = generate_instance(kind, 5, default_distribution(kind), 40 + i);
      Solution s;
      auto seq = [&](int lo, int hi) {
        std::vector<int> v(static_cast<std::size_t>(uniform_int(rng, 0, 7)));
        for (auto& x : v) x = static_cast<int>(uniform_int(rng, lo, hi));
        return v;
      };
      switch (kind) {
        case ProblemKind::TSP: s = Tour{seq(0, 4)}; break;
        case ProblemKind::OP: s = PrizeRoute{seq(0, 4)}; break;
        case ProblemKind::CVRP: s = RouteSet{{seq(1, 4), seq(1, 4)}}; break;
        case ProblemKind::MIS:
        case ProblemKind::MVC: s = VertexSet{seq(0, 4)}; break;
        case ProblemKind::PFSP: s = JobOrder{seq(1, 5)}; break;
        case ProblemKind::JSSP: s = MachineSchedules{{seq(1, 5), seq(1, 5), seq(1, 5)}}; break;
      }
      const auto r = check_feasibility(inst, s);
      EXPECT_EQ(r.magnitude == 0.0, r.feasible);
      EXPECT_EQ(r.violations.empty(), r.feasible);
      EXPECT_EQ(violation_magnitude(inst, s), r.magnitude);
    }
  }
}

TEST(Distance, Basics) {
  EXPECT_EQ(solution_distance(Tour{{0, 2, 1}}, Tour{{0, 2, 1}}), 0.0);
  EXPECT_EQ(solution_distance(VertexSet{{0, 2}}, VertexSet{{0, 1, 2}}), 1.0);
  EXPECT_EQ(solution_distance(Tour{{0, 2, 1}}, Tour{{0, 3, 2, 1}}), 1.0);
  EXPECT_EQ(testing_oracles::edit_distance_recursive({0, 2, 1}, {0, 3, 2, 1}), 1);
  expect_code(ErrorCode::KindMismatch, [] { solution_distance(Tour{{0}}, VertexSet{{0}}); });
}

TEST(Distance, EditDistanceMatchesRecursiveOracle) {
  Rng rng = child_rng(9, 0);
  for (int i = 0; i < 300; ++i) {
    std::vector<int> a(static_cast<std::size_t>(uniform_int(rng, 0, 7))), b(static_cast<std::size_t>(uniform_int(rng, 0, 7)));
    for (auto& x : a) x = static_cast<int>(uniform_int(rng, 0, 4));
    for (auto& x : b) x = static_cast<int>(uniform_int(rng, 0, 4));
    EXPECT_EQ(static_cast<int>(edit_distance(a, b)), testing_oracles::edit_distance_recursive(a, b));
    EXPECT_EQ(solution_distance(JobOrder{a}, JobOrder{b}), testing_oracles::edit_distance_recursive(a, b));
  }
}

TEST(Distance, MetricAxiomsOnRandomTriples) {
  Rng rng = child_rng(10, 0);
  auto random_routes = [&] {
    RouteSet rs;
    const int k = static_cast<int>(uniform_int(rng, 0, 3));
    for (int r = 0; r < k; ++r) {
      std::vector<int> route(static_cast<std::size_t>(uniform_int(rng, 1, 4)));
      for (auto& x : route) x = static_cast<int>(uniform_int(rng, 1, 6));
      rs.routes.push_back(route);
    }
    return Solution{rs};
  };
  auto random_set = [&] {
    VertexSet vs;
    for (int v = 0; v < 8; ++v)
      if (bernoulli(rng, 0.5)) vs.vertices.push_back(v);
    return Solution{vs};
  };
  for (int i = 0; i < 300; ++i) {
    const bool sets = i % 2 == 0;
    const Solution a = sets ? random_set() : random_routes();
    const Solution b = sets ? random_set() : random_routes();
    const Solution c = sets ? random_set() : random_routes();
    EXPECT_EQ(solution_distance(a, a), 0.0);
    EXPECT_EQ(solution_distance(a, b), solution_distance(b, a));
    EXPECT_LE(solution_distance(a, c), solution_distance(a, b) + solution_distance(b, c));
  }
}

TEST(Canonical, RoutesAndSets) {
  EXPECT_TRUE(same_solution(RouteSet{{{3, 1}, {2}}}, RouteSet{{{2}, {3, 1}}}));
  EXPECT_FALSE(same_solution(RouteSet{{{1, 3}}}, RouteSet{{{3, 1}}}));
  EXPECT_TRUE(same_solution(VertexSet{{2, 0, 2}}, VertexSet{{0, 2}}));
  EXPECT_EQ(solution_key(VertexSet{{2, 0}}), solution_key(VertexSet{{0, 2}}));
}

TEST(Gap, Examples) {
  EXPECT_DOUBLE_EQ(optimality_gap(105, 100, Sense::Minimize), 0.05);
  EXPECT_DOUBLE_EQ(optimality_gap(7.5, 7.5, Sense::Minimize), 0.0);
  EXPECT_DOUBLE_EQ(optimality_gap(7.5, 7.5, Sense::Maximize), 0.0);
  EXPECT_DOUBLE_EQ(optimality_gap(8, 10, Sense::Maximize), 0.2);
  EXPECT_EQ(optimality_gap(0, 0, Sense::Maximize), 0.0);
  expect_code(ErrorCode::ZeroReference, [] { optimality_gap(1, 0, Sense::Maximize); });
}

TEST(FeasibilityRate, Examples) {
  ViolationReport ok, bad;
  bad.feasible = false;
  bad.magnitude = 1;
  const std::vector<ViolationReport> all{ok, ok, ok, ok}, three{ok, ok, ok, bad}, none{bad, bad};
  EXPECT_EQ(feasibility_rate(all), 100.0);
  EXPECT_EQ(feasibility_rate(three), 75.0);
  EXPECT_EQ(feasibility_rate(none), 0.0);
  expect_code(ErrorCode::EmptyBatch, [] { feasibility_rate(std::vector<ViolationReport>{}); });
}

TEST(Validate, Invariants) {
  expect_code(ErrorCode::InstanceInvalid, [] { make_cvrp({{0, 0}, {1, 1}}, {0, 11}, 10); });
  expect_code(ErrorCode::InstanceInvalid, [] { make_op({{0, 0}, {1, 1}}, {0, -1}, 1); });
  expect_code(ErrorCode::InstanceInvalid, [] { make_op({{0, 0}, {1, 1}}, {0, 1}, 0); });
  expect_code(ErrorCode::InstanceInvalid, [] { make_graph(ProblemKind::MIS, 3, {{0, 3}}); });
  expect_code(ErrorCode::InstanceInvalid, [] { make_graph(ProblemKind::MIS, 3, {{0, 1}, {1, 0}}); });
  expect_code(ErrorCode::InstanceInvalid, [] { make_jssp({{{0, 1}, {0, 2}}}); });
  expect_code(ErrorCode::UnsupportedKind, [] { parse_kind("knapsack"); });
  EXPECT_EQ(parse_kind("tsp"), ProblemKind::TSP);
}

TEST(Lipschitz, ObjectiveChangePerEditIsBounded) {
  Rng rng = child_rng(11, 0);
  for (auto kind : {ProblemKind::TSP, ProblemKind::OP, ProblemKind::PFSP}) {
    const auto inst = generate_instance(kind, 6, default_distribution(kind), 77);
    const double lf = objective_lipschitz(inst);
    const int lo = kind == ProblemKind::PFSP ? 1 : 0, hi = kind == ProblemKind::PFSP ? 6 : 5;
    for (int i = 0; i < 200; ++i) {
      std::vector<int> a(static_cast<std::size_t>(uniform_int(rng, 1, 8)));
      for (auto& x : a) x = static_cast<int>(uniform_int(rng, lo, hi));
      auto b = a;
      const auto pos = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(a.size()) - 1));
      switch (i % 3) {
        case 0: b.erase(b.begin() + static_cast<long>(pos)); break;
        case 1: b.insert(b.begin() + static_cast<long>(pos), static_cast<int>(uniform_int(rng, lo, hi))); break;
        default: b[pos] = static_cast<int>(uniform_int(rng, lo, hi)); break;
      }
      if (b.empty() && kind == ProblemKind::TSP) continue;
      auto wrap = [&](std::vector<int> v) -> Solution {
        if (kind == ProblemKind::TSP) return Tour{v};
        if (kind == ProblemKind::OP) return PrizeRoute{v};
        return JobOrder{v};
      };
      const double df = std::abs(min_sense_objective(inst, wrap(a)) - min_sense_objective(inst, wrap(b)));
      EXPECT_LE(df, lf * solution_distance(wrap(a), wrap(b)) + 1e-9);
    }
  }
}
