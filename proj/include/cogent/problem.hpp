#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cogent {

enum class ProblemKind { TSP, OP, CVRP, MIS, MVC, PFSP, JSSP };

inline constexpr std::array<ProblemKind, 7> kAllKinds = {
    ProblemKind::TSP, ProblemKind::OP,   ProblemKind::CVRP, ProblemKind::MIS,
    ProblemKind::MVC, ProblemKind::PFSP, ProblemKind::JSSP};

std::string_view kind_name(ProblemKind kind);
/// Case-insensitive; throws UnsupportedKind.
ProblemKind parse_kind(std::string_view name);

enum class Sense { Minimize, Maximize };
Sense sense_of(ProblemKind kind);

// ---------------------------------------------------------------------------
// Instances

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct TspData {
  std::vector<Point> coords;
  bool operator==(const TspData&) const = default;
};

/// Node 0 is the depot. prizes[0] == 0.
struct OpData {
  std::vector<Point> coords;
  std::vector<double> prizes;
  double budget = 0.0;
  bool operator==(const OpData&) const = default;
};

/// Node 0 is the depot. demands[0] == 0.
struct CvrpData {
  std::vector<Point> coords;
  std::vector<double> demands;
  double capacity = 0.0;
  bool operator==(const CvrpData&) const = default;
};

struct Edge {
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph. Edges are stored with u < v, sorted, without duplicates.
struct GraphData {
  int num_vertices = 0;
  std::vector<Edge> edges;
  bool operator==(const GraphData&) const = default;
};

/// times[j][k]: processing time of job j+1 on machine k (0-based machine index).
struct PfspData {
  int jobs = 0;
  int machines = 0;
  std::vector<std::vector<double>> times;
  bool operator==(const PfspData&) const = default;
};

struct Operation {
  int machine = 0;  // 0-based
  double duration = 0.0;
  bool operator==(const Operation&) const = default;
};

/// ops[j]: routing of job j+1, one operation per machine.
struct JsspData {
  int jobs = 0;
  int machines = 0;
  std::vector<std::vector<Operation>> ops;
  bool operator==(const JsspData&) const = default;
};

using InstanceData = std::variant<TspData, OpData, CvrpData, GraphData, PfspData, JsspData>;

struct Instance {
  ProblemKind kind = ProblemKind::TSP;
  std::string id;
  std::uint64_t seed = 0;
  InstanceData data;

  template <typename T>
  const T& as() const {
    return std::get<T>(data);
  }

  /// Index range size used to specialize the output grammar: nodes for routing,
  /// vertices for graphs, jobs for scheduling.
  int size() const;
  /// Machine count for scheduling kinds, 0 otherwise.
  int machines() const;

  bool operator==(const Instance&) const = default;
};

/// Throws InstanceInvalid when an invariant of the payload does not hold.
void validate(const Instance& instance);

Instance make_tsp(std::vector<Point> coords);
Instance make_op(std::vector<Point> coords, std::vector<double> prizes, double budget);
Instance make_cvrp(std::vector<Point> coords, std::vector<double> demands, double capacity);
/// Normalizes edge orientation and order. kind must be MIS or MVC.
Instance make_graph(ProblemKind kind, int num_vertices, std::vector<Edge> edges);
Instance make_pfsp(std::vector<std::vector<double>> times);
Instance make_jssp(std::vector<std::vector<Operation>> ops);

double distance(const std::vector<Point>& coords, int a, int b);

// ---------------------------------------------------------------------------
// Solutions. Routing payloads never contain the depot; scheduling jobs are 1-based.

struct Tour {
  std::vector<int> nodes;
  bool operator==(const Tour&) const = default;
};
struct PrizeRoute {
  std::vector<int> nodes;
  bool operator==(const PrizeRoute&) const = default;
};
struct RouteSet {
  std::vector<std::vector<int>> routes;
  bool operator==(const RouteSet&) const = default;
};
struct VertexSet {
  std::vector<int> vertices;
  bool operator==(const VertexSet&) const = default;
};
struct JobOrder {
  std::vector<int> jobs;
  bool operator==(const JobOrder&) const = default;
};
struct MachineSchedules {
  std::vector<std::vector<int>> machines;
  bool operator==(const MachineSchedules&) const = default;
};

using Solution = std::variant<Tour, PrizeRoute, RouteSet, VertexSet, JobOrder, MachineSchedules>;

bool kind_accepts(ProblemKind kind, const Solution& solution);

/// Routes sorted lexicographically (so by first customer), vertex sets sorted and
/// deduplicated; sequence payloads are their own canonical form.
Solution canonical(const Solution& solution);
/// Stable text key of the canonical form, for hashing and equality counting.
std::string solution_key(const Solution& solution);
bool same_solution(const Solution& a, const Solution& b);

// ---------------------------------------------------------------------------
// Evaluation

struct Violation {
  std::string constraint;
  std::string detail;
  double amount = 0.0;
};

struct ViolationReport {
  bool feasible = true;
  std::vector<Violation> violations;
  double magnitude = 0.0;
};

double objective(const Instance& instance, const Solution& solution);
ViolationReport check_feasibility(const Instance& instance, const Solution& solution);
double violation_magnitude(const Instance& instance, const Solution& solution);

/// Edit distance for sequences, symmetric difference for sets, summed per aligned
/// component (canonical route order, machine index) for nested payloads.
double solution_distance(const Solution& a, const Solution& b);

/// Lipschitz constant of the objective with respect to solution_distance on this
/// instance (used by the end-to-end quality bound).
double objective_lipschitz(const Instance& instance);

double optimality_gap(double value, double reference, Sense sense);
/// Percentage of feasible reports; throws EmptyBatch on empty input.
double feasibility_rate(std::span<const ViolationReport> reports);

/// Objective in "smaller is better" form: negated for maximization kinds.
double min_sense_objective(const Instance& instance, const Solution& solution);

// Shared numeric kernels.
double closed_tour_length(const std::vector<Point>& coords, std::span<const int> nodes);
/// Length of depot -> nodes... -> depot.
double depot_route_length(const std::vector<Point>& coords, std::span<const int> nodes);
double route_load(const CvrpData& data, std::span<const int> nodes);
/// Flow shop makespan for a 1-based job sequence (duplicates are processed as given).
double pfsp_makespan(const PfspData& data, std::span<const int> jobs);

std::size_t edit_distance(std::span<const int> a, std::span<const int> b);

}  // namespace cogent
