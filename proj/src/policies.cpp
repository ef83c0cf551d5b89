#include "cogent/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cogent/error.hpp"
#include "cogent/instance_io.hpp"
#include "cogent/random.hpp"

namespace cogent {

namespace {

constexpr double kBlocked = -30.0;
constexpr double kFavored = 5.0;

double log_sum_exp(const std::vector<double>& xs) {
  if (xs.empty()) return kBlocked;
  const double top = *std::max_element(xs.begin(), xs.end());
  double s = 0.0;
  for (double x : xs) s += std::exp(x - top);
  return top + std::log(s);
}

/// Reading of a partial output: committed list items, the digits of an unfinished
/// index, and where in the sentence the next token goes.
struct PrefixView {
  bool in_number = false;
  bool seen_dot = false;
  int number_tokens = 0;
  bool open = false;  // inside a list that takes items
  bool at_list_start = false;
  std::vector<std::vector<int>> lists;
  std::string partial;
};

PrefixView analyze(ProblemKind kind, std::span<const TokenId> prefix) {
  const bool nested = kind == ProblemKind::CVRP || kind == ProblemKind::JSSP;
  PrefixView v;
  for (TokenId t : prefix) {
    if (v.in_number) {
      ++v.number_tokens;
      if (t == tok::kDot) v.seen_dot = true;
      continue;
    }
    if (tok::is_digit(t)) {
      v.partial.push_back(static_cast<char>('0' + tok::digit_value(t)));
      v.at_list_start = false;
      continue;
    }
    if (!v.partial.empty()) {
      v.lists.back().push_back(std::stoi(v.partial));
      v.partial.clear();
    }
    if (t == tok::kObjective) {
      v.in_number = true;
    } else if (t == tok::kOpen || (!nested && t != tok::kSep && t != tok::kClose)) {
      v.lists.emplace_back();
      v.open = true;
      v.at_list_start = true;
    } else if (t == tok::kClose) {
      v.open = false;
    } else if (t == tok::kSep) {
      v.at_list_start = v.open;
    }
  }
  return v;
}

std::pair<double, double> log_split(double cont, double stop) {
  const double z = log_sum_exp({cont, stop});
  return {cont - z, stop - z};
}

}  // namespace

std::vector<double> UniformValidPolicy::next_logits(std::string_view, std::span<const TokenId>) const {
  return std::vector<double>(tok::kCount, 0.0);
}

ScriptedPolicy::ScriptedPolicy(std::string_view script, std::uint64_t noise_seed)
    : script_(Vocabulary::standard().tokenize(script)), noise_seed_(noise_seed) {}

ScriptedPolicy::ScriptedPolicy(std::vector<TokenId> script, std::uint64_t noise_seed)
    : script_(std::move(script)), noise_seed_(noise_seed) {}

std::vector<double> ScriptedPolicy::next_logits(std::string_view, std::span<const TokenId> prefix) const {
  std::vector<double> out(tok::kCount);
  Rng noise = child_rng(noise_seed_, prefix.size());
  for (auto& x : out) x = 10.0 * uniform01(noise) - 5.0;
  const TokenId want = prefix.size() < script_.size() ? script_[prefix.size()] : tok::kEos;
  out[want] = 50.0;
  return out;
}

HeuristicPolicy::HeuristicPolicy(Instance instance, double beta) : instance_(std::move(instance)), beta_(beta) {
  if (const auto* g = std::get_if<GraphData>(&instance_.data)) {
    degree_.assign(g->num_vertices, 0);
    adjacency_.assign(g->num_vertices, {});
    for (const auto& e : g->edges) {
      ++degree_[e.u];
      ++degree_[e.v];
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
  }
  if (const auto* p = std::get_if<PfspData>(&instance_.data)) {
    double total = 0.0;
    for (const auto& row : p->times)
      for (double t : row) total += t;
    pfsp_scale_ = total / (p->jobs * p->machines);
  }
}

std::vector<double> HeuristicPolicy::next_logits(std::string_view, std::span<const TokenId> prefix) const {
  std::vector<double> out(tok::kCount, 0.0);
  const ProblemKind kind = instance_.kind;
  const PrefixView v = analyze(kind, prefix);

  if (v.in_number) {
    out[tok::digit(0)] = 2.0;
    out[tok::kDot] = kFavored;
    out[tok::kEos] = kFavored;
    return out;
  }

  const bool scheduling = kind == ProblemKind::PFSP || kind == ProblemKind::JSSP;
  const int lo = scheduling ? 1 : 0;
  const int hi = lo + instance_.size() - 1;
  const std::vector<int> none;
  const std::vector<int>& current = v.lists.empty() ? none : v.lists.back();

  // Score of appending item i to `items` (the current inner list).
  auto score = [&](const std::vector<int>& items, int i) -> double {
    const bool repeat = std::find(items.begin(), items.end(), i) != items.end();
    switch (kind) {
      case ProblemKind::TSP: {
        if (repeat) return kBlocked;
        if (items.empty()) return 0.0;
        return -beta_ * distance(instance_.as<TspData>().coords, items.back(), i);
      }
      case ProblemKind::OP: {
        const auto& d = instance_.as<OpData>();
        if (repeat || i == 0) return kBlocked;
        std::vector<int> route = items;
        route.push_back(i);
        if (depot_route_length(d.coords, route) > d.budget) return kBlocked;
        const int last = items.empty() ? 0 : items.back();
        return beta_ * (d.prizes[i] - distance(d.coords, last, i));
      }
      case ProblemKind::CVRP: {
        const auto& d = instance_.as<CvrpData>();
        if (i == 0) return kBlocked;
        for (const auto& l : v.lists)
          if (std::find(l.begin(), l.end(), i) != l.end()) return kBlocked;
        if (repeat || route_load(d, items) + d.demands[i] > d.capacity) return kBlocked;
        const int last = items.empty() ? 0 : items.back();
        return -beta_ * distance(d.coords, last, i);
      }
      case ProblemKind::MIS: {
        if (repeat) return kBlocked;
        for (int u : adjacency_[i])
          if (std::find(items.begin(), items.end(), u) != items.end()) return kBlocked;
        return -static_cast<double>(degree_[i]);
      }
      case ProblemKind::MVC: {
        if (repeat) return kBlocked;
        int uncovered = 0;
        for (int u : adjacency_[i]) uncovered += std::find(items.begin(), items.end(), u) == items.end();
        return uncovered == 0 ? kBlocked : static_cast<double>(uncovered);
      }
      case ProblemKind::PFSP: {
        if (repeat) return kBlocked;
        const auto& row = instance_.as<PfspData>().times[i - 1];
        return -2.0 * (row.front() - row.back()) / pfsp_scale_;
      }
      case ProblemKind::JSSP: {
        if (repeat) return kBlocked;
        const int machine = static_cast<int>(v.lists.size()) - 1;
        const auto& ops = instance_.as<JsspData>().ops[i - 1];
        for (std::size_t k = 0; k < ops.size(); ++k)
          if (ops[k].machine == machine) return -2.0 * static_cast<double>(k);
        return 0.0;
      }
    }
    return 0.0;
  };

  // Log-odds of adding another item to `items` versus closing the inner list.
  auto inner_split = [&](const std::vector<int>& items) {
    bool more = false;
    for (int i = lo; i <= hi && !more; ++i) more = score(items, i) > kBlocked;
    return more ? log_split(0.0, kBlocked) : log_split(kBlocked, 0.0);
  };

  if (!v.open) {
    // Between inner lists of a nested payload.
    bool more;
    if (kind == ProblemKind::JSSP) {
      more = static_cast<int>(v.lists.size()) < instance_.machines();
    } else {
      std::set<int> seen;
      for (const auto& l : v.lists) seen.insert(l.begin(), l.end());
      more = static_cast<int>(seen.size()) < instance_.size() - 1;
    }
    const auto [cont, stop] = more ? log_split(0.0, kBlocked) : log_split(kBlocked, 0.0);
    out[tok::kSep] = cont;
    out[tok::kObjective] = stop;
    return out;
  }

  const TokenId close = (kind == ProblemKind::CVRP || kind == ProblemKind::JSSP) ? tok::kClose : tok::kObjective;
  for (int d = 0; d < 10; ++d) {
    const std::string want = v.partial + static_cast<char>('0' + d);
    std::vector<double> candidates;
    for (int i = lo; i <= hi; ++i) {
      const std::string s = std::to_string(i);
      if (s.compare(0, want.size(), want) == 0) candidates.push_back(score(current, i));
    }
    out[tok::digit(d)] = log_sum_exp(candidates);
  }
  if (v.partial.empty()) {
    if (v.at_list_start) {
      const auto [cont, stop] = inner_split(current);
      for (int d = 0; d < 10; ++d) out[tok::digit(d)] += cont;
      out[close] = stop;
    }
  } else {
    const int item = std::stoi(v.partial);
    const double base = score(current, item);
    std::vector<int> committed = current;
    committed.push_back(item);
    const auto [cont, stop] = inner_split(committed);
    out[tok::kSep] = base + cont;
    out[close] = base + stop;
  }
  return out;
}

std::unique_ptr<PolicySource> make_policy(const std::string& spec, const Instance& instance) {
  if (spec == "uniform") return std::make_unique<UniformValidPolicy>();
  if (spec == "heuristic") return std::make_unique<HeuristicPolicy>(instance);
  if (spec.rfind("scripted:", 0) == 0) return std::make_unique<ScriptedPolicy>(read_text_file(spec.substr(9)));
  throw Error(ErrorCode::FormatError, "unknown policy '" + spec + "'");
}

}  // namespace cogent
