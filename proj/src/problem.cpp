#include "cogent/problem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "cogent/error.hpp"
#include "cogent/schedule.hpp"

namespace cogent {

std::string_view kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::TSP: return "TSP";
    case ProblemKind::OP: return "OP";
    case ProblemKind::CVRP: return "CVRP";
    case ProblemKind::MIS: return "MIS";
    case ProblemKind::MVC: return "MVC";
    case ProblemKind::PFSP: return "PFSP";
    case ProblemKind::JSSP: return "JSSP";
  }
  return "?";
}

ProblemKind parse_kind(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto kind : kAllKinds) {
    if (kind_name(kind) == upper) return kind;
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown problem kind '" + std::string(name) + "'");
}

Sense sense_of(ProblemKind kind) {
  return (kind == ProblemKind::OP || kind == ProblemKind::MIS) ? Sense::Maximize : Sense::Minimize;
}

int Instance::size() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GraphData>) return d.num_vertices;
        else if constexpr (std::is_same_v<T, PfspData> || std::is_same_v<T, JsspData>) return d.jobs;
        else return static_cast<int>(d.coords.size());
      },
      data);
}

int Instance::machines() const {
  if (const auto* p = std::get_if<PfspData>(&data)) return p->machines;
  if (const auto* j = std::get_if<JsspData>(&data)) return j->machines;
  return 0;
}

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InstanceInvalid, why); }

bool finite_point(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void check_coords(const std::vector<Point>& coords, std::size_t min_count) {
  if (coords.size() < min_count) invalid("too few nodes");
  for (const auto& p : coords) {
    if (!finite_point(p)) invalid("non-finite coordinate");
  }
}

bool payload_matches(ProblemKind kind, const InstanceData& data) {
  switch (kind) {
    case ProblemKind::TSP: return std::holds_alternative<TspData>(data);
    case ProblemKind::OP: return std::holds_alternative<OpData>(data);
    case ProblemKind::CVRP: return std::holds_alternative<CvrpData>(data);
    case ProblemKind::MIS:
    case ProblemKind::MVC: return std::holds_alternative<GraphData>(data);
    case ProblemKind::PFSP: return std::holds_alternative<PfspData>(data);
    case ProblemKind::JSSP: return std::holds_alternative<JsspData>(data);
  }
  return false;
}

}  // namespace

void validate(const Instance& instance) {
  if (!payload_matches(instance.kind, instance.data)) invalid("payload does not match kind");
  switch (instance.kind) {
    case ProblemKind::TSP: check_coords(instance.as<TspData>().coords, 1); break;
    case ProblemKind::OP: {
      const auto& d = instance.as<OpData>();
      check_coords(d.coords, 1);
      if (d.prizes.size() != d.coords.size()) invalid("prize count must equal node count");
      if (d.prizes[0] != 0.0) invalid("depot prize must be 0");
      for (std::size_t i = 1; i < d.prizes.size(); ++i) {
        if (!(d.prizes[i] > 0.0) || !std::isfinite(d.prizes[i])) invalid("prizes must be positive");
      }
      if (!(d.budget > 0.0) || !std::isfinite(d.budget)) invalid("budget must be positive");
      break;
    }
    case ProblemKind::CVRP: {
      const auto& d = instance.as<CvrpData>();
      check_coords(d.coords, 2);
      if (d.demands.size() != d.coords.size()) invalid("demand count must equal node count");
      if (d.demands[0] != 0.0) invalid("depot demand must be 0");
      if (!(d.capacity > 0.0) || !std::isfinite(d.capacity)) invalid("capacity must be positive");
      for (std::size_t i = 1; i < d.demands.size(); ++i) {
        if (!(d.demands[i] > 0.0) || !std::isfinite(d.demands[i])) invalid("demands must be positive");
        if (d.demands[i] > d.capacity) {
          invalid("demand of customer " + std::to_string(i) + " exceeds capacity");
        }
      }
      break;
    }
    case ProblemKind::MIS:
    case ProblemKind::MVC: {
      const auto& g = instance.as<GraphData>();
      if (g.num_vertices < 1) invalid("graph needs at least one vertex");
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (e.u < 0 || e.v >= g.num_vertices || e.u >= e.v) invalid("edge endpoints out of range or unnormalized");
        if (i > 0 && !(g.edges[i - 1] < e)) invalid("edges must be sorted and unique");
      }
      break;
    }
    case ProblemKind::PFSP: {
      const auto& d = instance.as<PfspData>();
      if (d.jobs < 1 || d.machines < 1) invalid("need at least one job and one machine");
      if (d.times.size() != static_cast<std::size_t>(d.jobs)) invalid("processing time rows != jobs");
      for (const auto& row : d.times) {
        if (row.size() != static_cast<std::size_t>(d.machines)) invalid("processing time cols != machines");
        for (double t : row) {
          if (!(t > 0.0) || !std::isfinite(t)) invalid("processing times must be positive");
        }
      }
      break;
    }
    case ProblemKind::JSSP: {
      const auto& d = instance.as<JsspData>();
      if (d.jobs < 1 || d.machines < 1) invalid("need at least one job and one machine");
      if (d.ops.size() != static_cast<std::size_t>(d.jobs)) invalid("operation rows != jobs");
      for (const auto& job : d.ops) {
        if (job.size() != static_cast<std::size_t>(d.machines)) invalid("each job needs one operation per machine");
        std::vector<bool> seen(d.machines, false);
        for (const auto& op : job) {
          if (op.machine < 0 || op.machine >= d.machines || seen[op.machine]) {
            invalid("each job must visit each machine exactly once");
          }
          seen[op.machine] = true;
          if (!(op.duration > 0.0) || !std::isfinite(op.duration)) invalid("durations must be positive");
        }
      }
      break;
    }
  }
}

Instance make_tsp(std::vector<Point> coords) {
  Instance inst{ProblemKind::TSP, "", 0, TspData{std::move(coords)}};
  validate(inst);
  return inst;
}

Instance make_op(std::vector<Point> coords, std::vector<double> prizes, double budget) {
  Instance inst{ProblemKind::OP, "", 0, OpData{std::move(coords), std::move(prizes), budget}};
  validate(inst);
  return inst;
}

Instance make_cvrp(std::vector<Point> coords, std::vector<double> demands, double capacity) {
  Instance inst{ProblemKind::CVRP, "", 0, CvrpData{std::move(coords), std::move(demands), capacity}};
  validate(inst);
  return inst;
}

Instance make_graph(ProblemKind kind, int num_vertices, std::vector<Edge> edges) {
  if (kind != ProblemKind::MIS && kind != ProblemKind::MVC) {
    throw Error(ErrorCode::KindMismatch, "graph payload needs MIS or MVC");
  }
  for (auto& e : edges) {
    if (e.u == e.v) invalid("self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) invalid("duplicate edge");
  Instance inst{kind, "", 0, GraphData{num_vertices, std::move(edges)}};
  validate(inst);
  return inst;
}

Instance make_pfsp(std::vector<std::vector<double>> times) {
  const int jobs = static_cast<int>(times.size());
  const int machines = jobs > 0 ? static_cast<int>(times[0].size()) : 0;
  Instance inst{ProblemKind::PFSP, "", 0, PfspData{jobs, machines, std::move(times)}};
  validate(inst);
  return inst;
}

Instance make_jssp(std::vector<std::vector<Operation>> ops) {
  const int jobs = static_cast<int>(ops.size());
  const int machines = jobs > 0 ? static_cast<int>(ops[0].size()) : 0;
  Instance inst{ProblemKind::JSSP, "", 0, JsspData{jobs, machines, std::move(ops)}};
  validate(inst);
  return inst;
}

double distance(const std::vector<Point>& coords, int a, int b) {
  return std::hypot(coords[a].x - coords[b].x, coords[a].y - coords[b].y);
}

// ---------------------------------------------------------------------------

bool kind_accepts(ProblemKind kind, const Solution& solution) {
  switch (kind) {
    case ProblemKind::TSP: return std::holds_alternative<Tour>(solution);
    case ProblemKind::OP: return std::holds_alternative<PrizeRoute>(solution);
    case ProblemKind::CVRP: return std::holds_alternative<RouteSet>(solution);
    case ProblemKind::MIS:
    case ProblemKind::MVC: return std::holds_alternative<VertexSet>(solution);
    case ProblemKind::PFSP: return std::holds_alternative<JobOrder>(solution);
    case ProblemKind::JSSP: return std::holds_alternative<MachineSchedules>(solution);
  }
  return false;
}

namespace {

void require_kind(const Instance& instance, const Solution& solution) {
  if (!kind_accepts(instance.kind, solution)) {
    throw Error(ErrorCode::KindMismatch, "solution payload does not match " + std::string(kind_name(instance.kind)));
  }
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

void append_seq(std::ostringstream& os, const std::vector<int>& seq) {
  os << '[';
  for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? "," : "") << seq[i];
  os << ']';
}

}  // namespace

Solution canonical(const Solution& solution) {
  if (const auto* rs = std::get_if<RouteSet>(&solution)) {
    RouteSet out = *rs;
    std::sort(out.routes.begin(), out.routes.end());
    return out;
  }
  if (const auto* vs = std::get_if<VertexSet>(&solution)) return VertexSet{sorted_unique(vs->vertices)};
  return solution;
}

std::string solution_key(const Solution& solution) {
  const Solution c = canonical(solution);
  std::ostringstream os;
  os << c.index() << ':';
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Tour> || std::is_same_v<T, PrizeRoute>) append_seq(os, s.nodes);
        else if constexpr (std::is_same_v<T, VertexSet>) append_seq(os, s.vertices);
        else if constexpr (std::is_same_v<T, JobOrder>) append_seq(os, s.jobs);
        else if constexpr (std::is_same_v<T, RouteSet>) {
          for (const auto& r : s.routes) append_seq(os, r);
        } else {
          for (const auto& m : s.machines) append_seq(os, m);
        }
      },
      c);
  return os.str();
}

bool same_solution(const Solution& a, const Solution& b) { return canonical(a) == canonical(b); }

// ---------------------------------------------------------------------------

double closed_tour_length(const std::vector<Point>& coords, std::span<const int> nodes) {
  if (nodes.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    total += distance(coords, nodes[i], nodes[(i + 1) % nodes.size()]);
  }
  return total;
}

double depot_route_length(const std::vector<Point>& coords, std::span<const int> nodes) {
  if (nodes.empty()) return 0.0;
  double total = distance(coords, 0, nodes.front());
  for (std::size_t i = 1; i < nodes.size(); ++i) total += distance(coords, nodes[i - 1], nodes[i]);
  return total + distance(coords, nodes.back(), 0);
}

double route_load(const CvrpData& data, std::span<const int> nodes) {
  double load = 0.0;
  const int n = static_cast<int>(data.demands.size());
  for (int v : nodes) {
    if (v >= 0 && v < n) load += data.demands[v];
  }
  return load;
}

double pfsp_makespan(const PfspData& data, std::span<const int> jobs) {
  std::vector<double> completion(data.machines, 0.0);
  for (int job : jobs) {
    const auto& row = data.times[job - 1];
    completion[0] += row[0];
    for (int k = 1; k < data.machines; ++k) {
      completion[k] = std::max(completion[k], completion[k - 1]) + row[k];
    }
  }
  return jobs.empty() ? 0.0 : completion[data.machines - 1];
}

std::size_t edit_distance(std::span<const int> a, std::span<const int> b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

void check_range(std::span<const int> items, int lo, int hi, const char* what) {
  for (int v : items) {
    if (v < lo || v > hi) {
      throw Error(ErrorCode::IndexOutOfRange,
                  std::string(what) + " " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
    }
  }
}

}  // namespace

double objective(const Instance& instance, const Solution& solution) {
  require_kind(instance, solution);
  switch (instance.kind) {
    case ProblemKind::TSP: {
      const auto& d = instance.as<TspData>();
      const auto& nodes = std::get<Tour>(solution).nodes;
      check_range(nodes, 0, static_cast<int>(d.coords.size()) - 1, "node");
      return closed_tour_length(d.coords, nodes);
    }
    case ProblemKind::OP: {
      const auto& d = instance.as<OpData>();
      const auto& nodes = std::get<PrizeRoute>(solution).nodes;
      check_range(nodes, 0, static_cast<int>(d.coords.size()) - 1, "node");
      double prize = 0.0;
      for (int v : sorted_unique(nodes)) prize += d.prizes[v];
      return prize;
    }
    case ProblemKind::CVRP: {
      const auto& d = instance.as<CvrpData>();
      double total = 0.0;
      for (const auto& route : std::get<RouteSet>(solution).routes) {
        check_range(route, 0, static_cast<int>(d.coords.size()) - 1, "node");
        total += depot_route_length(d.coords, route);
      }
      return total;
    }
    case ProblemKind::MIS:
    case ProblemKind::MVC: {
      const auto& g = instance.as<GraphData>();
      const auto& vs = std::get<VertexSet>(solution).vertices;
      check_range(vs, 0, g.num_vertices - 1, "vertex");
      return static_cast<double>(sorted_unique(vs).size());
    }
    case ProblemKind::PFSP: {
      const auto& d = instance.as<PfspData>();
      const auto& jobs = std::get<JobOrder>(solution).jobs;
      check_range(jobs, 1, d.jobs, "job");
      return pfsp_makespan(d, jobs);
    }
    case ProblemKind::JSSP: {
      const auto& d = instance.as<JsspData>();
      const auto& ms = std::get<MachineSchedules>(solution);
      for (const auto& m : ms.machines) check_range(m, 1, d.jobs, "job");
      return jssp_makespan(d, ms);
    }
  }
  return 0.0;
}

double min_sense_objective(const Instance& instance, const Solution& solution) {
  const double f = objective(instance, solution);
  return sense_of(instance.kind) == Sense::Maximize ? -f : f;
}

// ---------------------------------------------------------------------------

namespace {

class ReportBuilder {
 public:
  void add(std::string constraint, std::string detail, double amount) {
    if (amount <= 0.0) return;
    report_.violations.push_back({std::move(constraint), std::move(detail), amount});
    report_.magnitude += amount;
    report_.feasible = false;
  }
  ViolationReport take() { return std::move(report_); }

 private:
  ViolationReport report_;
};

/// Out-of-range entries, repeated entries and missing members of [lo, hi] for a sequence
/// that must be a permutation of that range.
struct PermutationDefects {
  int out_of_range = 0;
  int duplicates = 0;
  int missing = 0;
};

PermutationDefects permutation_defects(std::span<const int> seq, int lo, int hi) {
  PermutationDefects out;
  std::vector<int> count(static_cast<std::size_t>(hi - lo + 1), 0);
  for (int v : seq) {
    if (v < lo || v > hi) {
      ++out.out_of_range;
    } else if (count[v - lo]++ > 0) {
      ++out.duplicates;
    }
  }
  for (int c : count) out.missing += (c == 0);
  return out;
}

void report_permutation(ReportBuilder& rb, const PermutationDefects& pd, const std::string& where) {
  rb.add("index", where + std::to_string(pd.out_of_range) + " out-of-range entries", pd.out_of_range);
  rb.add("duplicate", where + std::to_string(pd.duplicates) + " repeated entries", pd.duplicates);
  rb.add("missing", where + std::to_string(pd.missing) + " missing entries", pd.missing);
}

ViolationReport check_op(const OpData& d, const std::vector<int>& nodes) {
  ReportBuilder rb;
  const int n = static_cast<int>(d.coords.size());
  int oor = 0, depot = 0, dup = 0;
  std::vector<bool> seen(n, false);
  std::vector<int> in_range;
  for (int v : nodes) {
    if (v < 0 || v >= n) {
      ++oor;
      continue;
    }
    in_range.push_back(v);
    if (v == 0) ++depot;
    else if (seen[v]) ++dup;
    seen[v] = true;
  }
  rb.add("index", std::to_string(oor) + " out-of-range nodes", oor);
  rb.add("depot", std::to_string(depot) + " interior depot visits", depot);
  rb.add("duplicate", std::to_string(dup) + " repeated nodes", dup);
  const double length = depot_route_length(d.coords, in_range);
  if (length > d.budget) {
    rb.add("budget", "route length " + std::to_string(length) + " exceeds budget " + std::to_string(d.budget),
           std::ceil(length - d.budget));
  }
  return rb.take();
}

ViolationReport check_cvrp(const CvrpData& d, const RouteSet& rs) {
  ReportBuilder rb;
  const int n = static_cast<int>(d.coords.size());
  std::vector<int> count(n, 0);
  int oor = 0, depot = 0, empty = 0;
  for (std::size_t r = 0; r < rs.routes.size(); ++r) {
    const auto& route = rs.routes[r];
    if (route.empty()) ++empty;
    for (int v : route) {
      if (v < 0 || v >= n) ++oor;
      else if (v == 0) ++depot;
      else ++count[v];
    }
    const double load = route_load(d, route);
    if (load > d.capacity) {
      const double units = std::ceil((load - d.capacity) / d.capacity);
      rb.add("capacity", "route " + std::to_string(r) + " load " + std::to_string(load) + " exceeds " +
                             std::to_string(d.capacity), units);
    }
  }
  int dup = 0, missing = 0;
  for (int v = 1; v < n; ++v) {
    if (count[v] == 0) ++missing;
    else dup += count[v] - 1;
  }
  rb.add("index", std::to_string(oor) + " out-of-range nodes", oor);
  rb.add("depot", std::to_string(depot) + " interior depot visits", depot);
  rb.add("empty_route", std::to_string(empty) + " empty routes", empty);
  rb.add("duplicate", std::to_string(dup) + " customers served more than once", dup);
  rb.add("missing", std::to_string(missing) + " customers not served", missing);
  return rb.take();
}

ViolationReport check_jssp(const JsspData& d, const MachineSchedules& ms) {
  ReportBuilder rb;
  for (std::size_t k = 0; k < ms.machines.size(); ++k) {
    const std::string where = "machine " + std::to_string(k) + ": ";
    if (static_cast<int>(k) >= d.machines) {
      rb.add("machine_count", where + "no such machine", static_cast<double>(ms.machines[k].size()) + 1.0);
      continue;
    }
    report_permutation(rb, permutation_defects(ms.machines[k], 1, d.jobs), where);
  }
  for (int k = static_cast<int>(ms.machines.size()); k < d.machines; ++k) {
    rb.add("missing", "machine " + std::to_string(k) + ": sequence absent", d.jobs);
  }
  const auto perms = jssp_permutation_repair(d, ms.machines);
  const int forced = jssp_dispatch(d, perms).forced_picks;
  rb.add("precedence", std::to_string(forced) + " machine-order inversions against job routing", forced);
  return rb.take();
}

}  // namespace

ViolationReport check_feasibility(const Instance& instance, const Solution& solution) {
  require_kind(instance, solution);
  switch (instance.kind) {
    case ProblemKind::TSP: {
      ReportBuilder rb;
      const int n = instance.size();
      report_permutation(rb, permutation_defects(std::get<Tour>(solution).nodes, 0, n - 1), "");
      return rb.take();
    }
    case ProblemKind::PFSP: {
      ReportBuilder rb;
      report_permutation(rb, permutation_defects(std::get<JobOrder>(solution).jobs, 1, instance.size()), "");
      return rb.take();
    }
    case ProblemKind::OP: return check_op(instance.as<OpData>(), std::get<PrizeRoute>(solution).nodes);
    case ProblemKind::CVRP: return check_cvrp(instance.as<CvrpData>(), std::get<RouteSet>(solution));
    case ProblemKind::MIS:
    case ProblemKind::MVC: {
      ReportBuilder rb;
      const auto& g = instance.as<GraphData>();
      std::vector<bool> in(g.num_vertices, false);
      int oor = 0;
      for (int v : sorted_unique(std::get<VertexSet>(solution).vertices)) {
        if (v < 0 || v >= g.num_vertices) ++oor;
        else in[v] = true;
      }
      rb.add("index", std::to_string(oor) + " out-of-range vertices", oor);
      int bad = 0;
      for (const auto& e : g.edges) {
        const bool hit = instance.kind == ProblemKind::MIS ? (in[e.u] && in[e.v]) : (!in[e.u] && !in[e.v]);
        bad += hit;
      }
      if (instance.kind == ProblemKind::MIS) rb.add("independence", std::to_string(bad) + " conflict edges", bad);
      else rb.add("cover", std::to_string(bad) + " uncovered edges", bad);
      return rb.take();
    }
    case ProblemKind::JSSP: return check_jssp(instance.as<JsspData>(), std::get<MachineSchedules>(solution));
  }
  return {};
}

double violation_magnitude(const Instance& instance, const Solution& solution) {
  return check_feasibility(instance, solution).magnitude;
}

// ---------------------------------------------------------------------------

namespace {

double nested_distance(std::vector<std::vector<int>> a, std::vector<std::vector<int>> b) {
  const std::size_t len = std::max(a.size(), b.size());
  a.resize(len);
  b.resize(len);
  double total = 0.0;
  for (std::size_t i = 0; i < len; ++i) total += static_cast<double>(edit_distance(a[i], b[i]));
  return total;
}

}  // namespace

double solution_distance(const Solution& a, const Solution& b) {
  if (a.index() != b.index()) throw Error(ErrorCode::KindMismatch, "distance between different payload kinds");
  const Solution ca = canonical(a);
  const Solution cb = canonical(b);
  return std::visit(
      [&](const auto& sa) -> double {
        using T = std::decay_t<decltype(sa)>;
        const auto& sb = std::get<T>(cb);
        if constexpr (std::is_same_v<T, Tour> || std::is_same_v<T, PrizeRoute>) {
          return static_cast<double>(edit_distance(sa.nodes, sb.nodes));
        } else if constexpr (std::is_same_v<T, JobOrder>) {
          return static_cast<double>(edit_distance(sa.jobs, sb.jobs));
        } else if constexpr (std::is_same_v<T, VertexSet>) {
          std::vector<int> diff;
          std::set_symmetric_difference(sa.vertices.begin(), sa.vertices.end(), sb.vertices.begin(),
                                        sb.vertices.end(), std::back_inserter(diff));
          return static_cast<double>(diff.size());
        } else if constexpr (std::is_same_v<T, RouteSet>) {
          return nested_distance(sa.routes, sb.routes);
        } else {
          return nested_distance(sa.machines, sb.machines);
        }
      },
      ca);
}

double objective_lipschitz(const Instance& instance) {
  auto max_pair = [](const std::vector<Point>& c) {
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) best = std::max(best, distance(c, int(i), int(j)));
    return best;
  };
  switch (instance.kind) {
    case ProblemKind::TSP: return 2.0 * max_pair(instance.as<TspData>().coords);
    case ProblemKind::CVRP: return 2.0 * max_pair(instance.as<CvrpData>().coords);
    case ProblemKind::OP: {
      const auto& p = instance.as<OpData>().prizes;
      return *std::max_element(p.begin(), p.end());
    }
    case ProblemKind::MIS:
    case ProblemKind::MVC: return 1.0;
    case ProblemKind::PFSP: {
      double best = 0.0;
      for (const auto& row : instance.as<PfspData>().times) {
        best = std::max(best, std::accumulate(row.begin(), row.end(), 0.0));
      }
      return 2.0 * best;
    }
    case ProblemKind::JSSP: {
      double total = 0.0;
      for (const auto& job : instance.as<JsspData>().ops)
        for (const auto& op : job) total += op.duration;
      return total;
    }
  }
  return 0.0;
}

double optimality_gap(double value, double reference, Sense sense) {
  if (reference == 0.0) {
    if (value == 0.0) return 0.0;
    throw Error(ErrorCode::ZeroReference, "gap undefined for zero reference and non-zero value");
  }
  const double diff = sense == Sense::Minimize ? value - reference : reference - value;
  return diff / std::abs(reference);
}

double feasibility_rate(std::span<const ViolationReport> reports) {
  if (reports.empty()) throw Error(ErrorCode::EmptyBatch, "no reports");
  const auto feasible = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return r.feasible; });
  return 100.0 * static_cast<double>(feasible) / static_cast<double>(reports.size());
}

// ---------------------------------------------------------------------------
// Job shop helpers

std::vector<std::vector<int>> jssp_permutation_repair(const JsspData& data,
                                                      const std::vector<std::vector<int>>& machines) {
  std::vector<std::vector<int>> out(data.machines);
  for (int k = 0; k < data.machines; ++k) {
    std::vector<bool> seen(data.jobs + 1, false);
    if (k < static_cast<int>(machines.size())) {
      for (int j : machines[k]) {
        if (j >= 1 && j <= data.jobs && !seen[j]) {
          out[k].push_back(j);
          seen[j] = true;
        }
      }
    }
    for (int j = 1; j <= data.jobs; ++j) {
      if (!seen[j]) out[k].push_back(j);
    }
  }
  return out;
}

DispatchResult jssp_dispatch(const JsspData& data, const std::vector<std::vector<int>>& machines) {
  const int m = data.machines;
  std::vector<std::deque<int>> queue(m);
  for (int k = 0; k < m; ++k) queue[k].assign(machines[k].begin(), machines[k].end());
  std::vector<int> next_op(data.jobs + 1, 0);
  DispatchResult result;
  result.machine_order.assign(m, {});
  const int total = data.jobs * m;
  for (int placed = 0; placed < total; ++placed) {
    int pick_machine = -1, pick_job = -1;
    for (int k = 0; k < m && pick_machine < 0; ++k) {
      if (queue[k].empty()) continue;
      const int j = queue[k].front();
      if (next_op[j] < m && data.ops[j - 1][next_op[j]].machine == k) {
        pick_machine = k;
        pick_job = j;
      }
    }
    if (pick_machine < 0) {
      // Deadlock: every machine head waits on an unfinished job predecessor.
      std::size_t best_pos = std::numeric_limits<std::size_t>::max();
      for (int j = 1; j <= data.jobs; ++j) {
        if (next_op[j] >= m) continue;
        const int k = data.ops[j - 1][next_op[j]].machine;
        const auto it = std::find(queue[k].begin(), queue[k].end(), j);
        const auto pos = static_cast<std::size_t>(it - queue[k].begin());
        if (pos < best_pos || (pos == best_pos && k < pick_machine)) {
          best_pos = pos;
          pick_machine = k;
          pick_job = j;
        }
      }
      ++result.forced_picks;
    }
    auto& q = queue[pick_machine];
    q.erase(std::find(q.begin(), q.end(), pick_job));
    result.machine_order[pick_machine].push_back(pick_job);
    ++next_op[pick_job];
  }
  return result;
}

namespace {

bool is_permutation_set(const JsspData& data, const std::vector<std::vector<int>>& machines) {
  if (static_cast<int>(machines.size()) != data.machines) return false;
  for (const auto& seq : machines) {
    const auto pd = permutation_defects(seq, 1, data.jobs);
    if (pd.out_of_range || pd.duplicates || pd.missing) return false;
  }
  return true;
}

}  // namespace

bool jssp_is_acyclic(const JsspData& data, const std::vector<std::vector<int>>& machines) {
  return jssp_dispatch(data, machines).forced_picks == 0;
}

double jssp_makespan(const JsspData& data, const MachineSchedules& schedules) {
  if (!is_permutation_set(data, schedules.machines)) {
    throw Error(ErrorCode::InvalidSolution, "each machine sequence must be a permutation of the jobs");
  }
  const int m = data.machines;
  std::vector<std::size_t> head(m, 0);
  std::vector<int> next_op(data.jobs + 1, 0);
  std::vector<double> job_ready(data.jobs + 1, 0.0), machine_ready(m, 0.0);
  double makespan = 0.0;
  for (int placed = 0; placed < data.jobs * m; ++placed) {
    bool progressed = false;
    for (int k = 0; k < m; ++k) {
      if (head[k] >= schedules.machines[k].size()) continue;
      const int j = schedules.machines[k][head[k]];
      if (next_op[j] >= m || data.ops[j - 1][next_op[j]].machine != k) continue;
      const double start = std::max(job_ready[j], machine_ready[k]);
      const double end = start + data.ops[j - 1][next_op[j]].duration;
      job_ready[j] = machine_ready[k] = end;
      makespan = std::max(makespan, end);
      ++head[k];
      ++next_op[j];
      progressed = true;
      break;
    }
    if (!progressed) throw Error(ErrorCode::CyclicSchedule, "machine sequences contradict job routing");
  }
  return makespan;
}

}  // namespace cogent
