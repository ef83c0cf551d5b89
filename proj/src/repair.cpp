#include "cogent/repair.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cogent/error.hpp"
#include "cogent/schedule.hpp"

namespace cogent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Keeps the first occurrence of each id in [lo, hi]; drops everything else.
std::vector<int> dedupe_in_range(const std::vector<int>& seq, int lo, int hi, std::vector<bool>& seen) {
  std::vector<int> out;
  for (int v : seq) {
    if (v < lo || v > hi || seen[v]) continue;
    seen[v] = true;
    out.push_back(v);
  }
  return out;
}

VertexSet members(const std::vector<bool>& in) {
  VertexSet out;
  for (std::size_t v = 0; v < in.size(); ++v)
    if (in[v]) out.vertices.push_back(static_cast<int>(v));
  return out;
}

}  // namespace

double repair_alpha(const Instance& instance) {
  switch (instance.kind) {
    case ProblemKind::TSP:
    case ProblemKind::PFSP:
    case ProblemKind::MIS:
    case ProblemKind::MVC: return 1.0;
    case ProblemKind::OP: return static_cast<double>(instance.size());
    case ProblemKind::CVRP: return 2.0 * instance.size();
    case ProblemKind::JSSP: return 2.0;
  }
  return 1.0;
}

Tour repair_tsp(const Instance& instance, const Tour& tour) {
  const auto& coords = instance.as<TspData>().coords;
  const int n = static_cast<int>(coords.size());
  std::vector<bool> seen(n, false);
  std::vector<int> r = dedupe_in_range(tour.nodes, 0, n - 1, seen);
  for (int v = 0; v < n; ++v) {
    if (seen[v]) continue;
    if (r.empty()) {
      r.push_back(v);
      continue;
    }
    // Position i inserts between r[i-1] and r[i mod |r|].
    std::size_t best_pos = 1;
    double best_cost = kInf;
    for (std::size_t i = 1; i <= r.size(); ++i) {
      const int a = r[i - 1];
      const int b = r[i % r.size()];
      const double cost = distance(coords, a, v) + distance(coords, v, b) - distance(coords, a, b);
      if (cost < best_cost) {
        best_cost = cost;
        best_pos = i;
      }
    }
    r.insert(r.begin() + static_cast<long>(best_pos), v);
  }
  return Tour{r};
}

RouteSet repair_cvrp(const Instance& instance, const RouteSet& input, const RepairOptions& options) {
  const auto& d = instance.as<CvrpData>();
  const int n = static_cast<int>(d.coords.size());
  for (int v = 1; v < n; ++v) {
    if (d.demands[v] > d.capacity) throw Error(ErrorCode::InstanceInvalid, "customer demand exceeds capacity");
  }

  std::vector<bool> seen(n, false);
  seen[0] = true;  // depot never stays inside a route
  std::vector<std::vector<int>> routes;
  for (const auto& r : input.routes) {
    auto cleaned = dedupe_in_range(r, 0, n - 1, seen);
    if (!cleaned.empty()) routes.push_back(std::move(cleaned));
  }

  for (int v = 1; v < n; ++v) {
    if (seen[v]) continue;
    if (routes.empty()) {
      routes.push_back({v});
      continue;
    }
    std::size_t best_route = 0, best_pos = 0;
    double best_cost = kInf;
    for (std::size_t k = 0; k < routes.size(); ++k) {
      const auto& r = routes[k];
      for (std::size_t i = 0; i <= r.size(); ++i) {
        const int a = i == 0 ? 0 : r[i - 1];
        const int b = i == r.size() ? 0 : r[i];
        const double cost = distance(d.coords, a, v) + distance(d.coords, v, b) - distance(d.coords, a, b);
        if (cost < best_cost) {
          best_cost = cost;
          best_route = k;
          best_pos = i;
        }
      }
    }
    routes[best_route].insert(routes[best_route].begin() + static_cast<long>(best_pos), v);
  }

  if (!options.skip_split) {
    for (std::size_t k = 0; k < routes.size(); ++k) {
      while (route_load(d, routes[k]) > d.capacity) {
        auto& r = routes[k];
        std::size_t best = 1;
        double best_cost = kInf;
        double prefix = 0.0;
        for (std::size_t i = 1; i < r.size(); ++i) {
          prefix += d.demands[r[i - 1]];
          if (prefix > d.capacity) break;
          const double cost = distance(d.coords, r[i - 1], 0) + distance(d.coords, 0, r[i]) -
                              distance(d.coords, r[i - 1], r[i]);
          if (cost < best_cost) {
            best_cost = cost;
            best = i;
          }
        }
        std::vector<int> tail(r.begin() + static_cast<long>(best), r.end());
        r.resize(best);
        routes.push_back(std::move(tail));
      }
    }
  }
  return RouteSet{routes};
}

PrizeRoute repair_op(const Instance& instance, const PrizeRoute& route) {
  const auto& d = instance.as<OpData>();
  const int n = static_cast<int>(d.coords.size());
  std::vector<bool> seen(n, false);
  seen[0] = true;
  std::vector<int> r = dedupe_in_range(route.nodes, 0, n - 1, seen);
  while (!r.empty() && depot_route_length(d.coords, r) > d.budget) {
    std::size_t worst = 0;
    double worst_ratio = kInf;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const int prev = i == 0 ? 0 : r[i - 1];
      const int next = i + 1 == r.size() ? 0 : r[i + 1];
      const double contrib = std::max(
          0.0, distance(d.coords, prev, r[i]) + distance(d.coords, r[i], next) - distance(d.coords, prev, next));
      const double ratio = contrib > 0.0 ? d.prizes[r[i]] / contrib : kInf;
      if (ratio < worst_ratio) {
        worst_ratio = ratio;
        worst = i;
      }
    }
    r.erase(r.begin() + static_cast<long>(worst));
  }
  return PrizeRoute{r};
}

VertexSet repair_mis(const Instance& instance, const VertexSet& set) {
  const auto& g = instance.as<GraphData>();
  std::vector<bool> in(g.num_vertices, false);
  bool changed = false;
  for (int v : set.vertices) {
    if (v >= 0 && v < g.num_vertices) in[v] = true;
    else changed = true;
  }
  std::vector<int> degree(g.num_vertices, 0);
  for (const auto& e : g.edges) {
    if (in[e.u] && in[e.v]) {
      ++degree[e.u];
      ++degree[e.v];
    }
  }
  // Edges are sorted, and removals only clear conflicts, so one pass visits conflicts in
  // the order a rescan from the start would.
  for (const auto& e : g.edges) {
    if (!(in[e.u] && in[e.v])) continue;
    const int drop = degree[e.v] > degree[e.u] ? e.v : e.u;
    in[drop] = false;
    for (const auto& f : g.edges) {
      if ((f.u == drop && in[f.v]) || (f.v == drop && in[f.u])) --degree[f.u == drop ? f.v : f.u];
    }
    degree[drop] = 0;
    changed = true;
  }
  return changed ? members(in) : set;
}

VertexSet repair_mvc(const Instance& instance, const VertexSet& set) {
  const auto& g = instance.as<GraphData>();
  std::vector<bool> in(g.num_vertices, false);
  bool changed = false;
  for (int v : set.vertices) {
    if (v >= 0 && v < g.num_vertices) in[v] = true;
    else changed = true;
  }
  auto uncovered_degree = [&](int x) {
    int count = 0;
    for (const auto& e : g.edges) count += (e.u == x || e.v == x) && !in[e.u] && !in[e.v];
    return count;
  };
  for (const auto& e : g.edges) {
    if (in[e.u] || in[e.v]) continue;
    in[uncovered_degree(e.u) >= uncovered_degree(e.v) ? e.u : e.v] = true;
    changed = true;
  }
  return changed ? members(in) : set;
}

JobOrder repair_pfsp(const Instance& instance, const JobOrder& order) {
  const auto& d = instance.as<PfspData>();
  std::vector<bool> seen(d.jobs + 1, false);
  std::vector<int> seq = dedupe_in_range(order.jobs, 1, d.jobs, seen);
  for (int j = 1; j <= d.jobs; ++j) {
    if (seen[j]) continue;
    std::size_t best_pos = 0;
    double best = kInf;
    std::vector<int> trial;
    for (std::size_t i = 0; i <= seq.size(); ++i) {
      trial = seq;
      trial.insert(trial.begin() + static_cast<long>(i), j);
      const double span = pfsp_makespan(d, trial);
      if (span < best) {
        best = span;
        best_pos = i;
      }
    }
    seq.insert(seq.begin() + static_cast<long>(best_pos), j);
  }
  return JobOrder{seq};
}

MachineSchedules repair_jssp(const Instance& instance, const MachineSchedules& schedules) {
  const auto& d = instance.as<JsspData>();
  return MachineSchedules{jssp_dispatch(d, jssp_permutation_repair(d, schedules.machines)).machine_order};
}

RepairOutcome repair(const Instance& instance, const Solution& solution, const RepairOptions& options) {
  if (!kind_accepts(instance.kind, solution)) {
    throw Error(ErrorCode::KindMismatch, "solution payload does not match " + std::string(kind_name(instance.kind)));
  }
  RepairOutcome out;
  switch (instance.kind) {
    case ProblemKind::TSP: out.repaired = repair_tsp(instance, std::get<Tour>(solution)); break;
    case ProblemKind::OP: out.repaired = repair_op(instance, std::get<PrizeRoute>(solution)); break;
    case ProblemKind::CVRP: out.repaired = repair_cvrp(instance, std::get<RouteSet>(solution), options); break;
    case ProblemKind::MIS: out.repaired = repair_mis(instance, std::get<VertexSet>(solution)); break;
    case ProblemKind::MVC: out.repaired = repair_mvc(instance, std::get<VertexSet>(solution)); break;
    case ProblemKind::PFSP: out.repaired = repair_pfsp(instance, std::get<JobOrder>(solution)); break;
    case ProblemKind::JSSP: out.repaired = repair_jssp(instance, std::get<MachineSchedules>(solution)); break;
  }
  out.modified = !(out.repaired == solution);
  out.distance_moved = out.modified ? solution_distance(solution, out.repaired) : 0.0;
  out.input_magnitude = violation_magnitude(instance, solution);
  out.alpha_bound = repair_alpha(instance);
  return out;
}

}  // namespace cogent
