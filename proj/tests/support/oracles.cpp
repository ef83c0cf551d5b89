#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>

namespace testing_oracles {

using cogent::Grammar;
using cogent::TokenId;

Earley::Earley(const Grammar& g) : g_(g), nullable_(g.nonterminals().size(), false) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g_.productions()) {
      if (nullable_[p.lhs]) continue;
      bool all = true;
      for (const auto& s : p.rhs) all = all && !s.terminal && nullable_[s.id];
      if (all) nullable_[p.lhs] = changed = true;
    }
  }
}

void Earley::close(Chart& sets) const {
  const auto& prods = g_.productions();
  const std::size_t k = sets.size() - 1;
  std::vector<Item> work(sets[k].begin(), sets[k].end());
  auto add = [&](const Item& it) {
    if (sets[k].insert(it).second) work.push_back(it);
  };
  while (!work.empty()) {
    const Item it = work.back();
    work.pop_back();
    const auto& p = prods[it.prod];
    if (it.dot < static_cast<int>(p.rhs.size())) {
      const auto& s = p.rhs[it.dot];
      if (s.terminal) continue;
      for (int j = 0; j < static_cast<int>(prods.size()); ++j)
        if (prods[j].lhs == s.id) add({j, 0, static_cast<int>(k)});
      if (nullable_[s.id]) add({it.prod, it.dot + 1, it.origin});
    } else {
      const std::vector<Item> origin(sets[it.origin].begin(), sets[it.origin].end());
      for (const auto& o : origin) {
        const auto& op = prods[o.prod];
        if (o.dot < static_cast<int>(op.rhs.size()) && !op.rhs[o.dot].terminal && op.rhs[o.dot].id == p.lhs) {
          add({o.prod, o.dot + 1, o.origin});
        }
      }
    }
  }
}

Earley::Chart Earley::start() const {
  Chart sets(1);
  const auto& prods = g_.productions();
  for (int i = 0; i < static_cast<int>(prods.size()); ++i)
    if (prods[i].lhs == g_.start()) sets[0].insert({i, 0, 0});
  close(sets);
  return sets;
}

Earley::Chart Earley::extend(const Chart& chart, TokenId token) const {
  Chart sets = chart;
  std::set<Item> next;
  for (const auto& it : sets.back()) {
    const auto& p = g_.productions()[it.prod];
    if (it.dot < static_cast<int>(p.rhs.size()) && p.rhs[it.dot].terminal && p.rhs[it.dot].id == token)
      next.insert({it.prod, it.dot + 1, it.origin});
  }
  sets.push_back(std::move(next));
  close(sets);
  return sets;
}

Earley::Chart Earley::chart(const std::vector<TokenId>& tokens) const {
  Chart sets = start();
  for (auto t : tokens) sets = extend(sets, t);
  return sets;
}

bool Earley::viable(const std::vector<TokenId>& tokens) const { return viable(chart(tokens)); }

bool Earley::accepts(const std::vector<TokenId>& tokens) const { return accepts(chart(tokens)); }

bool Earley::accepts(const Chart& sets) const {
  for (const auto& it : sets.back()) {
    const auto& p = g_.productions()[it.prod];
    if (p.lhs == g_.start() && it.origin == 0 && it.dot == static_cast<int>(p.rhs.size())) return true;
  }
  return false;
}

double flow_shop_event_makespan(const cogent::PfspData& data, const std::vector<int>& jobs) {
  const int m = data.machines;
  const std::size_t n = jobs.size();
  // ready[k]: jobs waiting at machine k in arrival order; position in `jobs` order.
  std::vector<std::size_t> next(static_cast<std::size_t>(m), 0);  // next sequence index per machine
  std::vector<std::vector<double>> done(n, std::vector<double>(static_cast<std::size_t>(m), -1.0));
  std::vector<double> machine_free(static_cast<std::size_t>(m), 0.0);
  using Event = std::pair<double, int>;  // (time, machine)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  for (int k = 0; k < m; ++k) events.push({0.0, k});
  double makespan = 0.0;
  std::size_t finished = 0;
  while (finished < n * static_cast<std::size_t>(m) && !events.empty()) {
    const auto [t, k] = events.top();
    events.pop();
    const std::size_t i = next[k];
    if (i >= n) continue;
    if (machine_free[k] > t) continue;
    const bool upstream_done = k == 0 || (done[i][k - 1] >= 0.0 && done[i][k - 1] <= t);
    if (!upstream_done) continue;  // re-woken when the job arrives
    const double end = t + data.times[jobs[i] - 1][k];
    done[i][k] = end;
    machine_free[k] = end;
    ++next[k];
    ++finished;
    makespan = std::max(makespan, end);
    events.push({end, k});
    if (k + 1 < m) events.push({end, k + 1});
  }
  return makespan;
}

std::optional<double> job_shop_simulated_makespan(const cogent::JsspData& data,
                                                  const std::vector<std::vector<int>>& machines) {
  const int n = data.jobs;
  const int m = data.machines;
  std::vector<int> job_next(n, 0), machine_next(m, 0);
  std::vector<double> job_time(n, 0.0), machine_time(m, 0.0);
  int remaining = n * m;
  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (int k = 0; k < m; ++k) {
      if (machine_next[k] >= static_cast<int>(machines[k].size())) continue;
      const int j = machines[k][machine_next[k]] - 1;
      if (job_next[j] >= m || data.ops[j][job_next[j]].machine != k) continue;
      const double start = std::max(job_time[j], machine_time[k]);
      const double end = start + data.ops[j][job_next[j]].duration;
      job_time[j] = machine_time[k] = end;
      ++job_next[j];
      ++machine_next[k];
      --remaining;
      progress = true;
    }
  }
  if (remaining > 0) return std::nullopt;
  return *std::max_element(job_time.begin(), job_time.end());
}

int edit_distance_recursive(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<std::pair<std::size_t, std::size_t>, int> memo;
  std::function<int(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t j) -> int {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    const auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
    best = std::min(best, go(i + 1, j) + 1);
    best = std::min(best, go(i, j + 1) + 1);
    return memo[key] = best;
  };
  return go(0, 0);
}

double tour_length(const std::vector<cogent::Point>& pts, const std::vector<int>& tour) {
  double total = 0.0;
  for (std::size_t i = 0; i < tour.size(); ++i) {
    const auto& a = pts[tour[i]];
    const auto& b = pts[tour[(i + 1) % tour.size()]];
    total += std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y));
  }
  return total;
}

}  // namespace testing_oracles
