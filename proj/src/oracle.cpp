#include "cogent/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>

#include "cogent/error.hpp"
#include "cogent/schedule.hpp"

namespace cogent {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

bool jssp_within_caps(const JsspData& d) {
  if (d.jobs > 9) return false;
  double tuples = 1.0;
  for (int k = 0; k < d.machines; ++k) tuples *= static_cast<double>(factorial(d.jobs));
  return tuples <= 1e6;
}

void require_caps(const Instance& instance) {
  if (!within_oracle_caps(instance)) {
    throw Error(ErrorCode::TooLarge, std::string(kind_name(instance.kind)) + " instance exceeds the brute-force cap");
  }
}

/// Candidate kept by a search branch; lower key wins, earlier branch wins ties.
struct Best {
  double key = kInf;
  Solution solution;
  std::uint64_t explored = 0;
  bool found = false;
};

Best merge_branches(std::vector<Best>& branches) {
  Best out;
  for (auto& b : branches) {
    out.explored += b.explored;
    if (b.found && (!out.found || b.key < out.key)) {
      out.key = b.key;
      out.solution = std::move(b.solution);
      out.found = true;
    }
  }
  return out;
}

/// Unranks permutation `rank` of 1..n (lexicographic).
std::vector<int> unrank_permutation(int n, std::uint64_t rank) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> out;
  for (int i = n; i >= 1; --i) {
    const std::uint64_t f = factorial(i - 1);
    const auto idx = static_cast<std::size_t>(rank / f);
    rank %= f;
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<long>(idx));
  }
  return out;
}

std::vector<std::vector<int>> unrank_tuple(const JsspData& d, std::uint64_t index) {
  const std::uint64_t per = factorial(d.jobs);
  std::vector<std::vector<int>> machines(d.machines);
  for (int k = d.machines - 1; k >= 0; --k) {
    machines[k] = unrank_permutation(d.jobs, index % per);
    index /= per;
  }
  return machines;
}

std::uint64_t jssp_tuple_count(const JsspData& d) {
  std::uint64_t total = 1;
  for (int k = 0; k < d.machines; ++k) total *= factorial(d.jobs);
  return total;
}

/// Every set of routes over customers 1..n-1 (routes unordered, order inside a route
/// significant) whose loads fit. Customer c joins an existing route at any position or
/// opens a new route, so each route set is produced once.
void enumerate_route_sets(const CvrpData& d, const std::function<bool(const RouteSet&)>& visit) {
  const int n = static_cast<int>(d.coords.size());
  std::vector<std::vector<int>> routes;
  std::vector<double> loads;
  bool stop = false;
  std::function<void(int)> rec = [&](int c) {
    if (stop) return;
    if (c == n) {
      RouteSet rs{routes};
      std::sort(rs.routes.begin(), rs.routes.end());
      stop = !visit(rs);
      return;
    }
    for (std::size_t k = 0; k < routes.size() && !stop; ++k) {
      if (loads[k] + d.demands[c] > d.capacity) continue;
      loads[k] += d.demands[c];
      for (std::size_t pos = 0; pos <= routes[k].size() && !stop; ++pos) {
        routes[k].insert(routes[k].begin() + static_cast<long>(pos), c);
        rec(c + 1);
        routes[k].erase(routes[k].begin() + static_cast<long>(pos));
      }
      loads[k] -= d.demands[c];
    }
    if (stop) return;
    routes.push_back({c});
    loads.push_back(d.demands[c]);
    rec(c + 1);
    routes.pop_back();
    loads.pop_back();
  };
  rec(1);
}

/// Prize routes in lexicographic order, pruned by the budget (appending a customer never
/// shortens the closed route).
void enumerate_prize_routes(const OpData& d, const std::function<bool(const PrizeRoute&)>& visit) {
  const int n = static_cast<int>(d.coords.size());
  std::vector<int> route;
  std::vector<bool> used(n, false);
  bool stop = false;
  std::function<void()> rec = [&] {
    if (stop) return;
    if (!visit(PrizeRoute{route})) {
      stop = true;
      return;
    }
    for (int v = 1; v < n && !stop; ++v) {
      if (used[v]) continue;
      route.push_back(v);
      if (depot_route_length(d.coords, route) <= d.budget) {
        used[v] = true;
        rec();
        used[v] = false;
      }
      route.pop_back();
    }
  };
  rec();
}

std::vector<std::uint32_t> adjacency_masks(const GraphData& g) {
  std::vector<std::uint32_t> adj(g.num_vertices, 0);
  for (const auto& e : g.edges) {
    adj[e.u] |= 1U << e.v;
    adj[e.v] |= 1U << e.u;
  }
  return adj;
}

bool mask_feasible(ProblemKind kind, const GraphData& g, const std::vector<std::uint32_t>& adj, std::uint32_t mask) {
  if (kind == ProblemKind::MIS) {
    for (int v = 0; v < g.num_vertices; ++v) {
      if ((mask >> v & 1U) && (adj[v] & mask)) return false;
    }
    return true;
  }
  for (const auto& e : g.edges) {
    if (!(mask >> e.u & 1U) && !(mask >> e.v & 1U)) return false;
  }
  return true;
}

VertexSet mask_to_set(std::uint32_t mask, int n) {
  VertexSet s;
  for (int v = 0; v < n; ++v)
    if (mask >> v & 1U) s.vertices.push_back(v);
  return s;
}

Best brute_force_tsp(const TspData& d, Exec exec) {
  const int n = static_cast<int>(d.coords.size());
  if (n <= 2) {
    Best b;
    Tour t;
    for (int v = 0; v < n; ++v) t.nodes.push_back(v);
    b.key = closed_tour_length(d.coords, t.nodes);
    b.solution = t;
    b.explored = 1;
    b.found = true;
    return b;
  }
  // Node 0 first; branch on the second node.
  std::vector<Best> branches(static_cast<std::size_t>(n - 1));
  parallel_for(branches.size(), exec, [&](std::size_t b) {
    const int second = static_cast<int>(b) + 1;
    std::vector<int> rest;
    for (int v = 1; v < n; ++v)
      if (v != second) rest.push_back(v);
    std::vector<int> tour(static_cast<std::size_t>(n));
    auto& best = branches[b];
    do {
      tour[0] = 0;
      tour[1] = second;
      std::copy(rest.begin(), rest.end(), tour.begin() + 2);
      const double len = closed_tour_length(d.coords, tour);
      ++best.explored;
      if (len < best.key) {
        best.key = len;
        best.solution = Tour{tour};
        best.found = true;
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
  });
  return merge_branches(branches);
}

Best brute_force_op(const OpData& d) {
  const int n = static_cast<int>(d.coords.size());
  const int c = n - 1;  // customers 1..c map to bits 0..c-1
  const std::size_t subsets = std::size_t{1} << c;
  std::vector<double> dp(subsets * static_cast<std::size_t>(std::max(c, 1)), kInf);
  std::vector<int> parent(dp.size(), -1);
  auto at = [&](std::size_t s, int j) -> std::size_t { return s * static_cast<std::size_t>(c) + static_cast<std::size_t>(j); };
  for (int j = 0; j < c; ++j) dp[at(std::size_t{1} << j, j)] = distance(d.coords, 0, j + 1);
  for (std::size_t s = 1; s < subsets; ++s) {
    for (int j = 0; j < c; ++j) {
      if (!(s >> j & 1U) || dp[at(s, j)] == kInf) continue;
      for (int k = 0; k < c; ++k) {
        if (s >> k & 1U) continue;
        const std::size_t t = s | (std::size_t{1} << k);
        const double cand = dp[at(s, j)] + distance(d.coords, j + 1, k + 1);
        if (cand < dp[at(t, k)]) {
          dp[at(t, k)] = cand;
          parent[at(t, k)] = j;
        }
      }
    }
  }
  Best best;
  best.key = 0.0;  // empty route, prize 0 (negated)
  best.solution = PrizeRoute{};
  best.found = true;
  best.explored = 1;
  for (std::size_t s = 1; s < subsets; ++s) {
    double prize = 0.0;
    for (int j = 0; j < c; ++j)
      if (s >> j & 1U) prize += d.prizes[j + 1];
    int end = -1;
    double len = kInf;
    for (int j = 0; j < c; ++j) {
      if (!(s >> j & 1U) || dp[at(s, j)] == kInf) continue;
      const double total = dp[at(s, j)] + distance(d.coords, j + 1, 0);
      if (total < len) {
        len = total;
        end = j;
      }
    }
    ++best.explored;
    if (end < 0 || len > d.budget || -prize >= best.key) continue;
    std::vector<int> route;
    std::size_t cur = s;
    for (int j = end; j >= 0;) {
      route.push_back(j + 1);
      const int p = parent[at(cur, j)];
      cur &= ~(std::size_t{1} << j);
      j = p;
    }
    std::reverse(route.begin(), route.end());
    best.key = -prize;
    best.solution = PrizeRoute{route};
  }
  return best;
}

Best brute_force_graph(ProblemKind kind, const GraphData& g, Exec exec) {
  const auto adj = adjacency_masks(g);
  const std::uint64_t total = std::uint64_t{1} << g.num_vertices;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, total / 64);
  const std::size_t chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  std::vector<Best> branches(chunks);
  parallel_for(chunks, exec, [&](std::size_t b) {
    auto& best = branches[b];
    const std::uint64_t lo = b * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    std::uint32_t best_mask = 0;
    for (std::uint64_t m = lo; m < hi; ++m) {
      const auto mask = static_cast<std::uint32_t>(m);
      ++best.explored;
      if (!mask_feasible(kind, g, adj, mask)) continue;
      const double size = std::popcount(mask);
      const double key = kind == ProblemKind::MIS ? -size : size;
      if (key < best.key) {
        best.key = key;
        best_mask = mask;
        best.found = true;
      }
    }
    if (best.found) best.solution = mask_to_set(best_mask, g.num_vertices);
  });
  return merge_branches(branches);
}

Best brute_force_pfsp(const PfspData& d, Exec exec) {
  std::vector<Best> branches(static_cast<std::size_t>(d.jobs));
  parallel_for(branches.size(), exec, [&](std::size_t b) {
    const int first = static_cast<int>(b) + 1;
    std::vector<int> rest;
    for (int j = 1; j <= d.jobs; ++j)
      if (j != first) rest.push_back(j);
    std::vector<int> seq(static_cast<std::size_t>(d.jobs));
    auto& best = branches[b];
    do {
      seq[0] = first;
      std::copy(rest.begin(), rest.end(), seq.begin() + 1);
      const double span = pfsp_makespan(d, seq);
      ++best.explored;
      if (span < best.key) {
        best.key = span;
        best.solution = JobOrder{seq};
        best.found = true;
      }
    } while (std::next_permutation(rest.begin(), rest.end()));
  });
  return merge_branches(branches);
}

Best brute_force_jssp(const JsspData& d, Exec exec) {
  const std::uint64_t total = jssp_tuple_count(d);
  const std::uint64_t chunk = std::max<std::uint64_t>(1, total / 64);
  const std::size_t chunks = static_cast<std::size_t>((total + chunk - 1) / chunk);
  std::vector<Best> branches(chunks);
  parallel_for(chunks, exec, [&](std::size_t b) {
    auto& best = branches[b];
    const std::uint64_t lo = b * chunk;
    const std::uint64_t hi = std::min(total, lo + chunk);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      auto machines = unrank_tuple(d, idx);
      ++best.explored;
      if (!jssp_is_acyclic(d, machines)) continue;
      MachineSchedules ms{std::move(machines)};
      const double span = jssp_makespan(d, ms);
      if (span < best.key) {
        best.key = span;
        best.solution = std::move(ms);
        best.found = true;
      }
    }
  });
  return merge_branches(branches);
}

Best brute_force_cvrp(const CvrpData& d) {
  Best best;
  enumerate_route_sets(d, [&](const RouteSet& rs) {
    ++best.explored;
    double len = 0.0;
    for (const auto& r : rs.routes) len += depot_route_length(d.coords, r);
    if (len < best.key) {
      best.key = len;
      best.solution = rs;
      best.found = true;
    }
    return true;
  });
  return best;
}

}  // namespace

bool within_oracle_caps(const Instance& instance) {
  const int n = instance.size();
  switch (instance.kind) {
    case ProblemKind::TSP: return n <= 9;
    case ProblemKind::OP: return n <= 12;
    case ProblemKind::CVRP: return n <= 7;
    case ProblemKind::MIS:
    case ProblemKind::MVC: return n <= 20;
    case ProblemKind::PFSP: return n <= 8;
    case ProblemKind::JSSP: return jssp_within_caps(instance.as<JsspData>());
  }
  return false;
}

OracleResult brute_force(const Instance& instance, Exec exec) {
  require_caps(instance);
  const auto start = std::chrono::steady_clock::now();
  Best best;
  switch (instance.kind) {
    case ProblemKind::TSP: best = brute_force_tsp(instance.as<TspData>(), exec); break;
    case ProblemKind::OP: best = brute_force_op(instance.as<OpData>()); break;
    case ProblemKind::CVRP: best = brute_force_cvrp(instance.as<CvrpData>()); break;
    case ProblemKind::MIS:
    case ProblemKind::MVC: best = brute_force_graph(instance.kind, instance.as<GraphData>(), exec); break;
    case ProblemKind::PFSP: best = brute_force_pfsp(instance.as<PfspData>(), exec); break;
    case ProblemKind::JSSP: best = brute_force_jssp(instance.as<JsspData>(), exec); break;
  }
  if (!best.found) throw Error(ErrorCode::InstanceInvalid, "no feasible solution exists");
  OracleResult out;
  out.solution = best.solution;
  out.value = objective(instance, best.solution);
  out.explored = best.explored;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

Tour nearest_neighbor_tsp(const Instance& instance, int start) {
  const auto& coords = instance.as<TspData>().coords;
  const int n = static_cast<int>(coords.size());
  if (start < 0 || start >= n) throw Error(ErrorCode::IndexOutOfRange, "start node out of range");
  std::vector<bool> used(n, false);
  Tour t{{start}};
  used[start] = true;
  for (int step = 1; step < n; ++step) {
    const int last = t.nodes.back();
    int pick = -1;
    double best = kInf;
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      const double dist = distance(coords, last, v);
      if (dist < best) {
        best = dist;
        pick = v;
      }
    }
    used[pick] = true;
    t.nodes.push_back(pick);
  }
  return t;
}

std::vector<Solution> enumerate_feasible(const Instance& instance, std::size_t cap) {
  require_caps(instance);
  std::vector<Solution> out;
  if (cap == 0) return out;
  auto push = [&](Solution s) {
    out.push_back(std::move(s));
    return out.size() < cap;
  };
  switch (instance.kind) {
    case ProblemKind::TSP:
    case ProblemKind::PFSP: {
      const bool jobs = instance.kind == ProblemKind::PFSP;
      std::vector<int> seq(static_cast<std::size_t>(instance.size()));
      std::iota(seq.begin(), seq.end(), jobs ? 1 : 0);
      do {
        if (!push(jobs ? Solution{JobOrder{seq}} : Solution{Tour{seq}})) break;
      } while (std::next_permutation(seq.begin(), seq.end()));
      break;
    }
    case ProblemKind::OP:
      enumerate_prize_routes(instance.as<OpData>(), [&](const PrizeRoute& r) { return push(r); });
      break;
    case ProblemKind::CVRP:
      enumerate_route_sets(instance.as<CvrpData>(), [&](const RouteSet& rs) { return push(rs); });
      break;
    case ProblemKind::MIS:
    case ProblemKind::MVC: {
      const auto& g = instance.as<GraphData>();
      const auto adj = adjacency_masks(g);
      const std::uint64_t total = std::uint64_t{1} << g.num_vertices;
      for (std::uint64_t m = 0; m < total; ++m) {
        const auto mask = static_cast<std::uint32_t>(m);
        if (mask_feasible(instance.kind, g, adj, mask) && !push(mask_to_set(mask, g.num_vertices))) break;
      }
      break;
    }
    case ProblemKind::JSSP: {
      const auto& d = instance.as<JsspData>();
      const std::uint64_t total = jssp_tuple_count(d);
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        auto machines = unrank_tuple(d, idx);
        if (jssp_is_acyclic(d, machines) && !push(MachineSchedules{std::move(machines)})) break;
      }
      break;
    }
  }
  return out;
}

Solution random_feasible(const Instance& instance, Rng& rng) {
  const int n = instance.size();
  switch (instance.kind) {
    case ProblemKind::TSP: {
      std::vector<int> seq(static_cast<std::size_t>(n));
      std::iota(seq.begin(), seq.end(), 0);
      shuffle(seq, rng);
      return Tour{seq};
    }
    case ProblemKind::PFSP: {
      std::vector<int> seq(static_cast<std::size_t>(n));
      std::iota(seq.begin(), seq.end(), 1);
      shuffle(seq, rng);
      return JobOrder{seq};
    }
    case ProblemKind::OP: {
      const auto& d = instance.as<OpData>();
      std::vector<int> pool;
      for (int v = 1; v < n; ++v) pool.push_back(v);
      shuffle(pool, rng);
      const double keep = uniform01(rng);
      std::vector<int> route;
      for (int v : pool) {
        if (uniform01(rng) > keep) continue;
        route.push_back(v);
        if (depot_route_length(d.coords, route) > d.budget) route.pop_back();
      }
      return PrizeRoute{route};
    }
    case ProblemKind::CVRP: {
      const auto& d = instance.as<CvrpData>();
      std::vector<int> pool;
      for (int v = 1; v < n; ++v) pool.push_back(v);
      shuffle(pool, rng);
      RouteSet rs;
      double load = d.capacity + 1.0;
      for (int v : pool) {
        if (load + d.demands[v] > d.capacity || bernoulli(rng, 0.15)) {
          rs.routes.emplace_back();
          load = 0.0;
        }
        rs.routes.back().push_back(v);
        load += d.demands[v];
      }
      return rs;
    }
    case ProblemKind::MIS:
    case ProblemKind::MVC: {
      const auto& g = instance.as<GraphData>();
      std::vector<bool> in(static_cast<std::size_t>(n), false);
      if (instance.kind == ProblemKind::MIS) {
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);
        const double keep = uniform01(rng);
        for (int v : order) {
          if (uniform01(rng) > keep) continue;
          bool free = true;
          for (const auto& e : g.edges) {
            if ((e.u == v && in[e.v]) || (e.v == v && in[e.u])) free = false;
          }
          in[v] = free;
        }
      } else {
        for (int v = 0; v < n; ++v) in[v] = bernoulli(rng, 0.3);
        for (const auto& e : g.edges) {
          if (!in[e.u] && !in[e.v]) in[bernoulli(rng, 0.5) ? e.u : e.v] = true;
        }
      }
      VertexSet s;
      for (int v = 0; v < n; ++v)
        if (in[v]) s.vertices.push_back(v);
      return s;
    }
    case ProblemKind::JSSP: {
      const auto& d = instance.as<JsspData>();
      std::vector<int> next(d.jobs, 0);
      std::vector<int> pending;
      for (int j = 0; j < d.jobs; ++j)
        for (int k = 0; k < d.machines; ++k) pending.push_back(j);
      MachineSchedules ms;
      ms.machines.assign(d.machines, {});
      // Random interleaving of the jobs' operation chains is a topological order.
      shuffle(pending, rng);
      for (int j : pending) {
        ms.machines[d.ops[j][next[j]].machine].push_back(j + 1);
        ++next[j];
      }
      return ms;
    }
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown kind");
}

}  // namespace cogent
