#include "cogent/generate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "cogent/error.hpp"
#include "cogent/random.hpp"

namespace cogent {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_routing(ProblemKind k) { return k == ProblemKind::TSP || k == ProblemKind::OP || k == ProblemKind::CVRP; }
bool is_graph(ProblemKind k) { return k == ProblemKind::MIS || k == ProblemKind::MVC; }

std::vector<Point> uniform_points(int n, Rng& rng) {
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = uniform01(rng);
    p.y = uniform01(rng);
  }
  return pts;
}

std::vector<Point> mixture_points(int n, Rng& rng) {
  constexpr int kComponents = 3;
  constexpr double kSigma = 0.08;
  std::vector<Point> centers(kComponents);
  for (auto& c : centers) {
    c.x = 0.2 + 0.6 * uniform01(rng);
    c.y = 0.2 + 0.6 * uniform01(rng);
  }
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    const auto& c = centers[static_cast<std::size_t>(uniform_int(rng, 0, kComponents - 1))];
    p.x = std::clamp(c.x + kSigma * standard_normal(rng), 0.0, 1.0);
    p.y = std::clamp(c.y + kSigma * standard_normal(rng), 0.0, 1.0);
  }
  return pts;
}

std::vector<Edge> erdos_renyi(int n, Rng& rng) {
  constexpr double kP = 0.15;
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (bernoulli(rng, kP)) edges.push_back({u, v});
  return edges;
}

std::vector<Edge> barabasi_albert(int n, Rng& rng) {
  constexpr int kAttach = 3;
  const int seed_size = std::min(n, kAttach + 1);
  std::vector<Edge> edges;
  std::vector<int> endpoints;  // each vertex once per incident edge
  for (int u = 0; u < seed_size; ++u)
    for (int v = u + 1; v < seed_size; ++v) {
      edges.push_back({u, v});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  for (int v = seed_size; v < n; ++v) {
    std::set<int> targets;
    while (static_cast<int>(targets.size()) < std::min(kAttach, v)) {
      const auto pick = uniform_int(rng, 0, static_cast<std::int64_t>(endpoints.size()) - 1);
      targets.insert(endpoints[static_cast<std::size_t>(pick)]);
    }
    for (int t : targets) {
      edges.push_back({t, v});
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return edges;
}

double taillard_time(Rng& rng) { return static_cast<double>(uniform_int(rng, 1, 99)); }

}  // namespace

Distribution parse_distribution(std::string_view name) {
  const auto n = lower(name);
  if (n == "uniform") return Distribution::Uniform;
  if (n == "gm") return Distribution::GaussianMixture;
  if (n == "er") return Distribution::ErdosRenyi;
  if (n == "ba") return Distribution::BarabasiAlbert;
  if (n == "taillard") return Distribution::Taillard;
  throw Error(ErrorCode::UnsupportedDistribution, "unknown distribution '" + std::string(name) + "'");
}

std::string_view distribution_name(Distribution dist) {
  switch (dist) {
    case Distribution::Uniform: return "uniform";
    case Distribution::GaussianMixture: return "gm";
    case Distribution::ErdosRenyi: return "er";
    case Distribution::BarabasiAlbert: return "ba";
    case Distribution::Taillard: return "taillard";
  }
  return "unknown";
}

Distribution default_distribution(ProblemKind kind) {
  if (is_routing(kind)) return Distribution::Uniform;
  if (is_graph(kind)) return Distribution::ErdosRenyi;
  return Distribution::Taillard;
}

void check_distribution(ProblemKind kind, Distribution dist) {
  bool ok = false;
  if (is_routing(kind)) ok = dist == Distribution::Uniform || dist == Distribution::GaussianMixture;
  else if (is_graph(kind)) ok = dist == Distribution::ErdosRenyi || dist == Distribution::BarabasiAlbert;
  else ok = dist == Distribution::Taillard || dist == Distribution::Uniform;
  if (!ok) {
    throw Error(ErrorCode::UnsupportedDistribution,
                std::string(distribution_name(dist)) + " does not apply to " + std::string(kind_name(kind)));
  }
}

double op_budget_for(int nodes) { return nodes <= 20 ? 2.0 : nodes <= 50 ? 3.0 : 4.0; }

double cvrp_capacity_for(int nodes) { return nodes <= 20 ? 20.0 : nodes <= 50 ? 30.0 : nodes <= 100 ? 40.0 : 50.0; }

Instance generate_instance(ProblemKind kind, int size, Distribution dist, std::uint64_t seed,
                           const GenerateOptions& options) {
  if (size < 1) throw Error(ErrorCode::DomainError, "size must be at least 1");
  check_distribution(kind, dist);
  Rng rng = child_rng(seed, 0);
  Instance inst;
  auto points = [&] { return dist == Distribution::GaussianMixture ? mixture_points(size, rng) : uniform_points(size, rng); };
  switch (kind) {
    case ProblemKind::TSP: inst = make_tsp(points()); break;
    case ProblemKind::OP: {
      auto coords = points();
      std::vector<double> prizes(size, 0.0);
      for (int i = 1; i < size; ++i) prizes[i] = static_cast<double>(uniform_int(rng, 1, 100)) / 100.0;
      inst = make_op(std::move(coords), std::move(prizes), op_budget_for(size));
      break;
    }
    case ProblemKind::CVRP: {
      auto coords = points();
      std::vector<double> demands(size, 0.0);
      for (int i = 1; i < size; ++i) demands[i] = static_cast<double>(uniform_int(rng, 1, 9));
      inst = make_cvrp(std::move(coords), std::move(demands), cvrp_capacity_for(size));
      break;
    }
    case ProblemKind::MIS:
    case ProblemKind::MVC:
      inst = make_graph(kind, size, dist == Distribution::BarabasiAlbert ? barabasi_albert(size, rng) : erdos_renyi(size, rng));
      break;
    case ProblemKind::PFSP: {
      const int m = options.machines > 0 ? options.machines : 5;
      std::vector<std::vector<double>> times(size, std::vector<double>(m));
      for (auto& row : times)
        for (auto& t : row) t = taillard_time(rng);
      inst = make_pfsp(std::move(times));
      break;
    }
    case ProblemKind::JSSP: {
      const int m = options.machines > 0 ? options.machines : 3;
      std::vector<std::vector<Operation>> ops(size);
      for (auto& job : ops) {
        std::vector<int> order(m);
        for (int k = 0; k < m; ++k) order[k] = k;
        shuffle(order, rng);
        for (int k = 0; k < m; ++k) job.push_back({order[k], taillard_time(rng)});
      }
      inst = make_jssp(std::move(ops));
      break;
    }
  }
  inst.seed = seed;
  inst.id = std::string(kind_name(kind)) + "-" + std::to_string(size) + "-" + std::to_string(seed);
  return inst;
}

}  // namespace cogent
