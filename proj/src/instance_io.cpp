#include "cogent/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cogent/error.hpp"

namespace cogent {

using Json = nlohmann::ordered_json;

namespace {

Json coords_json(const std::vector<Point>& coords) {
  Json arr = Json::array();
  for (const auto& p : coords) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Point> coords_from(const Json& arr) {
  std::vector<Point> out;
  for (const auto& p : arr) {
    if (!p.is_array() || p.size() != 2) throw Error(ErrorCode::FormatError, "coordinate must be [x, y]");
    out.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return out;
}

/// Values for customers 1..n-1 (the depot entry is implicit).
Json customer_values(const std::vector<double>& values) {
  return Json(std::vector<double>(values.begin() + 1, values.end()));
}

std::vector<double> with_depot(const Json& arr) {
  std::vector<double> out{0.0};
  for (const auto& v : arr) out.push_back(v.get<double>());
  return out;
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::FormatError, std::string("missing field '") + key + "'");
  return doc.at(key);
}

}  // namespace

Json instance_to_json(const Instance& instance) {
  Json doc;
  doc["kind"] = std::string(kind_name(instance.kind));
  doc["id"] = instance.id;
  doc["seed"] = instance.seed;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, TspData>) {
          doc["coords"] = coords_json(d.coords);
        } else if constexpr (std::is_same_v<T, OpData>) {
          doc["coords"] = coords_json(d.coords);
          doc["prizes"] = customer_values(d.prizes);
          doc["budget"] = d.budget;
        } else if constexpr (std::is_same_v<T, CvrpData>) {
          doc["coords"] = coords_json(d.coords);
          doc["demands"] = customer_values(d.demands);
          doc["capacity"] = d.capacity;
        } else if constexpr (std::is_same_v<T, GraphData>) {
          doc["num_vertices"] = d.num_vertices;
          Json edges = Json::array();
          for (const auto& e : d.edges) edges.push_back({e.u, e.v});
          doc["edges"] = edges;
        } else if constexpr (std::is_same_v<T, PfspData>) {
          doc["jobs"] = d.jobs;
          doc["machines"] = d.machines;
          doc["times"] = d.times;
        } else {
          doc["jobs"] = d.jobs;
          doc["machines"] = d.machines;
          Json ops = Json::array();
          for (const auto& job : d.ops) {
            Json row = Json::array();
            for (const auto& op : job) row.push_back({op.machine, op.duration});
            ops.push_back(row);
          }
          doc["ops"] = ops;
        }
      },
      instance.data);
  return doc;
}

Instance instance_from_json(const Json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::FormatError, "instance document must be an object");
  Instance inst;
  try {
    inst.kind = parse_kind(field(doc, "kind").get<std::string>());
    inst.id = doc.value("id", std::string{});
    inst.seed = doc.value("seed", std::uint64_t{0});
    switch (inst.kind) {
      case ProblemKind::TSP: inst.data = TspData{coords_from(field(doc, "coords"))}; break;
      case ProblemKind::OP:
        inst.data = OpData{coords_from(field(doc, "coords")), with_depot(field(doc, "prizes")),
                           field(doc, "budget").get<double>()};
        break;
      case ProblemKind::CVRP:
        inst.data = CvrpData{coords_from(field(doc, "coords")), with_depot(field(doc, "demands")),
                             field(doc, "capacity").get<double>()};
        break;
      case ProblemKind::MIS:
      case ProblemKind::MVC: {
        GraphData g;
        g.num_vertices = field(doc, "num_vertices").get<int>();
        for (const auto& e : field(doc, "edges")) {
          if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::FormatError, "edge must be [u, v]");
          Edge edge{e[0].get<int>(), e[1].get<int>()};
          if (edge.u > edge.v) std::swap(edge.u, edge.v);
          g.edges.push_back(edge);
        }
        std::sort(g.edges.begin(), g.edges.end());
        inst.data = std::move(g);
        break;
      }
      case ProblemKind::PFSP:
        inst.data = PfspData{field(doc, "jobs").get<int>(), field(doc, "machines").get<int>(),
                             field(doc, "times").get<std::vector<std::vector<double>>>()};
        break;
      case ProblemKind::JSSP: {
        JsspData d{field(doc, "jobs").get<int>(), field(doc, "machines").get<int>(), {}};
        for (const auto& job : field(doc, "ops")) {
          std::vector<Operation> row;
          for (const auto& op : job) {
            if (!op.is_array() || op.size() != 2) throw Error(ErrorCode::FormatError, "operation must be [machine, duration]");
            row.push_back({op[0].get<int>(), op[1].get<double>()});
          }
          d.ops.push_back(std::move(row));
        }
        inst.data = std::move(d);
        break;
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
  validate(inst);
  return inst;
}

std::string serialize_instance(const Instance& instance) { return instance_to_json(instance).dump(); }

Instance parse_instance(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
  return instance_from_json(doc);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Instance load_instance(const std::filesystem::path& path) { return parse_instance(read_text_file(path)); }

void save_instance(const std::filesystem::path& path, const Instance& instance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::FormatError, "cannot write " + path.string());
  out << serialize_instance(instance) << '\n';
}

}  // namespace cogent
