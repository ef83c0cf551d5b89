#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "cogent/error.hpp"
#include "cogent/generate.hpp"
#include "cogent/oracle.hpp"
#include "oracles.hpp"

using namespace cogent;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tsp_by_permutation(const Instance& inst) {
  const auto& pts = inst.as<TspData>().coords;
  std::vector<int> p(pts.size());
  std::iota(p.begin(), p.end(), 0);
  double best = kInf;
  do best = std::min(best, testing_oracles::tour_length(pts, p));
  while (std::next_permutation(p.begin(), p.end()));
  return best;
}

double graph_by_subsets(const Instance& inst) {
  const auto& g = inst.as<GraphData>();
  const bool mis = inst.kind == ProblemKind::MIS;
  double best = mis ? -1 : kInf;
  for (unsigned mask = 0; mask < (1u << g.num_vertices); ++mask) {
    bool ok = true;
    for (const auto& e : g.edges) {
      const bool a = mask >> e.u & 1u, b = mask >> e.v & 1u;
      if (mis ? (a && b) : !(a || b)) ok = false;
    }
    if (!ok) continue;
    const double size = std::popcount(mask);
    best = mis ? std::max(best, size) : std::min(best, size);
  }
  return best;
}

double op_by_subsets(const Instance& inst) {
  const auto& d = inst.as<OpData>();
  const int n = static_cast<int>(d.coords.size());
  double best = 0;
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<int> nodes;
    double prize = 0;
    for (int v = 1; v < n; ++v)
      if (mask >> (v - 1) & 1u) {
        nodes.push_back(v);
        prize += d.prizes[v];
      }
    if (prize <= best) continue;
    do {
      std::vector<int> closed{0};
      closed.insert(closed.end(), nodes.begin(), nodes.end());
      if (testing_oracles::tour_length(d.coords, closed) <= d.budget) {
        best = prize;
        break;
      }
    } while (std::next_permutation(nodes.begin(), nodes.end()));
  }
  return best;
}

double cvrp_by_giant_tours(const Instance& inst) {
  const auto& d = inst.as<CvrpData>();
  const int n = static_cast<int>(d.coords.size());
  std::vector<int> p(n - 1);
  std::iota(p.begin(), p.end(), 1);
  double best = kInf;
  do {
    for (unsigned cuts = 0; cuts < (1u << (n - 2 > 0 ? n - 2 : 0)); ++cuts) {
      double total = 0, load = 0;
      std::vector<int> route{0};
      bool ok = true;
      for (int i = 0; i < n - 1 && ok; ++i) {
        route.push_back(p[i]);
        load += d.demands[p[i]];
        if (load > d.capacity) ok = false;
        if (i == n - 2 || (cuts >> i & 1u)) {
          total += testing_oracles::tour_length(d.coords, route);
          route = {0};
          load = 0;
        }
      }
      if (ok) best = std::min(best, total);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

double pfsp_by_permutation(const Instance& inst) {
  const auto& d = inst.as<PfspData>();
  std::vector<int> p(d.jobs);
  std::iota(p.begin(), p.end(), 1);
  double best = kInf;
  do best = std::min(best, testing_oracles::flow_shop_event_makespan(d, p));
  while (std::next_permutation(p.begin(), p.end()));
  return best;
}

double jssp_by_tuples(const Instance& inst) {
  const auto& d = inst.as<JsspData>();
  std::vector<int> base(d.jobs);
  std::iota(base.begin(), base.end(), 1);
  std::vector<std::vector<int>> seqs(d.machines, base);
  double best = kInf;
  std::function<void(int)> rec = [&](int k) {
    if (k == d.machines) {
      if (auto v = testing_oracles::job_shop_simulated_makespan(d, seqs)) best = std::min(best, *v);
      return;
    }
    seqs[k] = base;
    do rec(k + 1);
    while (std::next_permutation(seqs[k].begin(), seqs[k].end()));
  };
  rec(0);
  return best;
}

double independent_optimum(const Instance& inst) {
  switch (inst.kind) {
    case ProblemKind::TSP: return tsp_by_permutation(inst);
    case ProblemKind::OP: return op_by_subsets(inst);
    case ProblemKind::CVRP: return cvrp_by_giant_tours(inst);
    case ProblemKind::MIS:
    case ProblemKind::MVC: return graph_by_subsets(inst);
    case ProblemKind::PFSP: return pfsp_by_permutation(inst);
    case ProblemKind::JSSP: return jssp_by_tuples(inst);
  }
  return 0;
}

}  // namespace

TEST(BruteForce, Examples) {
  const auto sq = make_tsp({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const auto r = brute_force(sq);
  EXPECT_DOUBLE_EQ(r.value, 4.0);
  EXPECT_DOUBLE_EQ(objective(sq, r.solution), 4.0);
  const auto mis = brute_force(make_graph(ProblemKind::MIS, 3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(mis.solution, Solution(VertexSet{{0, 2}}));
  const auto mvc = brute_force(make_graph(ProblemKind::MVC, 3, {{0, 1}, {1, 2}}));
  EXPECT_EQ(mvc.solution, Solution(VertexSet{{1}}));
}

TEST(BruteForce, MatchesIndependentEnumeration) {
  for (auto kind : kAllKinds) {
    for (int seed = 0; seed < 6; ++seed) {
      int size = 6;
      GenerateOptions opts;
      if (kind == ProblemKind::CVRP) size = 5;
      if (kind == ProblemKind::MIS || kind == ProblemKind::MVC) size = 10;
      if (kind == ProblemKind::JSSP) {
        size = 3;
        opts.machines = 2 + seed % 2;
      }
      if (kind == ProblemKind::PFSP) opts.machines = 3;
      const auto inst = generate_instance(kind, size, default_distribution(kind), 900 + seed, opts);
      const auto r = brute_force(inst);
      EXPECT_TRUE(check_feasibility(inst, r.solution).feasible);
      EXPECT_NEAR(r.value, objective(inst, r.solution), 1e-9);
      EXPECT_NEAR(r.value, independent_optimum(inst), 1e-9) << kind_name(kind) << " seed " << seed;
    }
  }
}

TEST(BruteForce, SerialEqualsParallel) {
  for (auto kind : kAllKinds) {
    const auto inst = generate_instance(kind, kind == ProblemKind::JSSP ? 3 : 6, default_distribution(kind), 5);
    const auto a = brute_force(inst, Exec::Serial), b = brute_force(inst, Exec::Parallel);
    EXPECT_EQ(a.solution, b.solution);
    EXPECT_EQ(a.value, b.value);
  }
}

TEST(BruteForce, CapsEnforced) {
  const auto big = generate_instance(ProblemKind::TSP, 10, Distribution::Uniform, 1);
  EXPECT_FALSE(within_oracle_caps(big));
  try {
    brute_force(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(NearestNeighbor, Examples) {
  const auto sq = make_tsp({{0, 0}, {1, 0}, {1, 1}, {0, 1.1}});
  EXPECT_EQ(nearest_neighbor_tsp(sq).nodes, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(nearest_neighbor_tsp(make_tsp({{0.5, 0.5}})).nodes, (std::vector<int>{0}));
  for (int seed = 0; seed < 20; ++seed) {
    const auto inst = generate_instance(ProblemKind::TSP, 15, Distribution::GaussianMixture, seed);
    EXPECT_TRUE(check_feasibility(inst, nearest_neighbor_tsp(inst, seed % 15)).feasible);
  }
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_feasible(make_tsp({{0, 0}, {1, 0}, {0, 1}})).size(), 6u);
  EXPECT_EQ(enumerate_feasible(make_graph(ProblemKind::MIS, 3, {{0, 1}, {0, 2}, {1, 2}})).size(), 4u);
  const auto cvrp = enumerate_feasible(make_cvrp({{0, 0}, {1, 0}, {0, 1}}, {0, 1, 1}, 5));
  EXPECT_EQ(cvrp.size(), 3u);
  std::set<std::string> keys;
  for (const auto& s : cvrp) keys.insert(solution_key(s));
  EXPECT_EQ(keys.size(), 3u);
  EXPECT_EQ(enumerate_feasible(make_tsp({{0, 0}, {1, 0}, {0, 1}, {1, 1}}), 5).size(), 5u);
}

TEST(Enumerate, AllFeasibleAndDistinct) {
  for (auto kind : kAllKinds) {
    const auto inst = generate_instance(kind, kind == ProblemKind::JSSP ? 2 : 4, default_distribution(kind), 3);
    const auto all = enumerate_feasible(inst);
    std::set<std::string> keys;
    for (const auto& s : all) {
      EXPECT_TRUE(check_feasibility(inst, s).feasible);
      keys.insert(solution_key(s));
    }
    EXPECT_EQ(keys.size(), all.size()) << kind_name(kind);
  }
}

TEST(RandomFeasible, AlwaysFeasible) {
  Rng rng = child_rng(33, 0);
  for (auto kind : kAllKinds)
    for (int i = 0; i < 50; ++i) {
      const auto inst = generate_instance(kind, 8, default_distribution(kind), i);
      EXPECT_TRUE(check_feasibility(inst, random_feasible(inst, rng)).feasible);
    }
}
