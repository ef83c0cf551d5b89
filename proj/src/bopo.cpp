#include "cogent/bopo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cogent/error.hpp"

namespace cogent {

namespace {

double log_sigmoid(double x) { return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }
double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

}  // namespace

std::vector<double> normalized_weights(std::span<const double> gaps, double clamp) {
  if (gaps.empty()) return {};
  if (!(clamp >= 1.0)) throw Error(ErrorCode::DomainError, "weight clamp must be at least 1");
  const double mean_gap = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
  std::vector<double> w(gaps.size());
  auto fill = [&](double scale) {
    for (std::size_t i = 0; i < gaps.size(); ++i) w[i] = std::clamp(scale * gaps[i] / mean_gap, 1.0 / clamp, clamp);
    return mean_of(w);
  };
  if (std::abs(fill(1.0) - 1.0) > 1e-15) {
    // mean(clamp(s * w)) is continuous and non-decreasing in s, from 1/clamp to clamp.
    double lo = 0.0, hi = 1.0;
    while (fill(hi) < 1.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (fill(mid) < 1.0 ? lo : hi) = mid;
    }
    fill(hi);
  }
  const double m = mean_of(w);
  for (auto& x : w) x /= m;
  return w;
}

PreferenceBatch build_pairs_from_values(std::span<const Solution> samples,
                                        std::span<const std::optional<double>> values, double clamp) {
  if (samples.size() != values.size()) throw Error(ErrorCode::DomainError, "samples and values differ in length");
  PreferenceBatch batch;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!values[i]) continue;
    ++batch.feasible_count;
    if (!best || *values[i] < *values[*best]) best = i;
  }
  if (!best) return batch;
  batch.best = samples[*best];
  batch.best_objective = *values[*best];
  std::set<std::string> seen{solution_key(batch.best)};
  std::vector<double> gaps;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!values[i]) continue;
    const double gap = *values[i] - batch.best_objective;
    if (!(gap > 0.0) || !seen.insert(solution_key(samples[i])).second) continue;
    batch.pairs.push_back({samples[i], gap, 1.0});
    gaps.push_back(gap);
  }
  if (batch.pairs.empty()) return batch;
  batch.mean_gap = mean_of(gaps);
  const auto w = normalized_weights(gaps, clamp);
  for (std::size_t i = 0; i < w.size(); ++i) batch.pairs[i].weight = w[i];
  return batch;
}

PreferenceBatch build_pairs(const Instance& instance, std::span<const Solution> samples, double clamp) {
  std::vector<std::optional<double>> values;
  for (const auto& s : samples) {
    if (check_feasibility(instance, s).feasible) values.emplace_back(min_sense_objective(instance, s));
    else values.emplace_back(std::nullopt);
  }
  return build_pairs_from_values(samples, values, clamp);
}

ToySoftmaxPolicy::ToySoftmaxPolicy(std::vector<Solution> support)
    : ToySoftmaxPolicy(std::move(support), std::vector<double>{}) {}

ToySoftmaxPolicy::ToySoftmaxPolicy(std::vector<Solution> support, std::vector<double> theta)
    : support_(std::move(support)), theta_(std::move(theta)) {
  if (support_.empty()) throw Error(ErrorCode::DomainError, "empty support");
  if (theta_.empty()) theta_.assign(support_.size(), 0.0);
  if (theta_.size() != support_.size()) throw Error(ErrorCode::DomainError, "theta size != support size");
  for (const auto& s : support_) keys_.push_back(solution_key(s));
}

std::size_t ToySoftmaxPolicy::index_of(const Solution& s) const {
  const auto key = solution_key(s);
  const auto it = std::find(keys_.begin(), keys_.end(), key);
  if (it == keys_.end()) throw Error(ErrorCode::InvalidSolution, "solution outside the policy support");
  return static_cast<std::size_t>(it - keys_.begin());
}

std::vector<double> ToySoftmaxPolicy::probabilities() const {
  const double top = *std::max_element(theta_.begin(), theta_.end());
  std::vector<double> p(theta_.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) z += (p[i] = std::exp(theta_[i] - top));
  for (auto& x : p) x /= z;
  return p;
}

double ToySoftmaxPolicy::log_prob(std::size_t index) const {
  const double top = *std::max_element(theta_.begin(), theta_.end());
  double z = 0.0;
  for (double t : theta_) z += std::exp(t - top);
  return theta_.at(index) - top - std::log(z);
}

std::size_t ToySoftmaxPolicy::sample(Rng& rng) const {
  const auto p = probabilities();
  double u = uniform01(rng);
  for (std::size_t i = 0; i < p.size(); ++i) {
    u -= p[i];
    if (u < 0.0) return i;
  }
  return p.size() - 1;
}

namespace {

void require_batch(const PreferenceBatch& batch, double beta) {
  if (batch.pairs.empty()) throw Error(ErrorCode::EmptyBatch, "preference batch has no pairs");
  if (!(beta > 0.0)) throw Error(ErrorCode::DomainError, "beta must be positive");
}

}  // namespace

double bopo_loss(const ToySoftmaxPolicy& policy, const PreferenceBatch& batch, double beta) {
  require_batch(batch, beta);
  const auto& th = policy.theta();
  const std::size_t star = policy.index_of(batch.best);
  double total = 0.0;
  for (const auto& pair : batch.pairs) {
    const double margin = th[star] - th[policy.index_of(pair.inferior)];
    total -= pair.weight * log_sigmoid(beta * margin);
  }
  return total / static_cast<double>(batch.pairs.size());
}

std::vector<double> bopo_gradient(const ToySoftmaxPolicy& policy, const PreferenceBatch& batch, double beta) {
  require_batch(batch, beta);
  const auto& th = policy.theta();
  const std::size_t star = policy.index_of(batch.best);
  std::vector<double> grad(th.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(batch.pairs.size());
  for (const auto& pair : batch.pairs) {
    const std::size_t i = policy.index_of(pair.inferior);
    const double coef = scale * pair.weight * beta * sigmoid(-beta * (th[star] - th[i]));
    grad[star] -= coef;
    grad[i] += coef;
  }
  return grad;
}

double dpo_loss(const ToySoftmaxPolicy& policy, const Solution& preferred, const Solution& rejected, double beta) {
  const auto& th = policy.theta();
  if (!(beta > 0.0)) throw Error(ErrorCode::DomainError, "beta must be positive");
  return -log_sigmoid(beta * (th[policy.index_of(preferred)] - th[policy.index_of(rejected)]));
}

std::vector<double> dpo_gradient(const ToySoftmaxPolicy& policy, const Solution& preferred, const Solution& rejected,
                                 double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::DomainError, "beta must be positive");
  const auto& th = policy.theta();
  const std::size_t w = policy.index_of(preferred);
  const std::size_t l = policy.index_of(rejected);
  std::vector<double> grad(th.size(), 0.0);
  const double coef = beta * sigmoid(-beta * (th[w] - th[l]));
  grad[w] -= coef;
  grad[l] += coef;
  return grad;
}

std::vector<double> grpo_advantages(std::span<const double> rewards) {
  if (rewards.empty()) throw Error(ErrorCode::DegenerateRewards, "no rewards");
  const double n = static_cast<double>(rewards.size());
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double sd = std::sqrt(var / n);
  std::vector<double> a;
  for (double r : rewards) a.push_back((r - mean) / (sd + 1e-8));
  return a;
}

namespace {

void require_grpo(std::span<const Solution> samples, std::span<const double> rewards) {
  if (samples.empty() || samples.size() != rewards.size()) {
    throw Error(ErrorCode::DegenerateRewards, "need one reward per sample");
  }
}

}  // namespace

double grpo_loss(const ToySoftmaxPolicy& policy, std::span<const Solution> samples, std::span<const double> rewards) {
  require_grpo(samples, rewards);
  const auto adv = grpo_advantages(rewards);
  double total = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) total -= adv[i] * policy.log_prob(policy.index_of(samples[i]));
  return total / static_cast<double>(samples.size());
}

std::vector<double> grpo_gradient(const ToySoftmaxPolicy& policy, std::span<const Solution> samples,
                                  std::span<const double> rewards) {
  require_grpo(samples, rewards);
  const auto adv = grpo_advantages(rewards);
  const auto p = policy.probabilities();
  std::vector<double> grad(p.size(), 0.0);
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const std::size_t y = policy.index_of(samples[i]);
    for (std::size_t j = 0; j < p.size(); ++j) grad[j] += scale * adv[i] * p[j];
    grad[y] -= scale * adv[i];
  }
  return grad;
}

PreferenceBatch full_support_batch(const Instance& instance, const ToySoftmaxPolicy& policy, double clamp) {
  return build_pairs(instance, policy.support(), clamp);
}

double estimate_smoothness(const ToySoftmaxPolicy& policy, const PreferenceBatch& batch, double beta, int probes,
                           std::uint64_t seed) {
  double best = 0.0;
  for (int p = 0; p < probes; ++p) {
    Rng rng = child_rng(seed, static_cast<std::uint64_t>(p));
    std::vector<double> a(policy.size()), b(policy.size());
    for (auto& x : a) x = standard_normal(rng);
    for (auto& x : b) x = standard_normal(rng);
    const auto ga = bopo_gradient(ToySoftmaxPolicy(policy.support(), a), batch, beta);
    const auto gb = bopo_gradient(ToySoftmaxPolicy(policy.support(), b), batch, beta);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num += (ga[i] - gb[i]) * (ga[i] - gb[i]);
      den += (a[i] - b[i]) * (a[i] - b[i]);
    }
    if (den > 0.0) best = std::max(best, std::sqrt(num / den));
  }
  return best;
}

TrainTrace train_toy(const Instance& instance, ToySoftmaxPolicy policy, const TrainConfig& cfg) {
  if (cfg.steps < 1 || cfg.k < 1) throw Error(ErrorCode::DomainError, "need steps >= 1 and k >= 1");
  const auto& support = policy.support();
  std::vector<std::optional<double>> values;
  for (const auto& s : support) {
    if (check_feasibility(instance, s).feasible) values.emplace_back(min_sense_objective(instance, s));
    else values.emplace_back(std::nullopt);
  }
  const PreferenceBatch full = build_pairs_from_values(support, values, cfg.clamp);
  if (full.empty()) throw Error(ErrorCode::EmptyBatch, "support has no inferior solutions");

  TrainTrace trace;
  trace.smoothness = estimate_smoothness(policy, full, cfg.beta, cfg.probe_pairs, cfg.seed ^ 0x5eedULL);
  trace.learning_rate = cfg.learning_rate ? *cfg.learning_rate
                                          : 1.0 / (std::max(trace.smoothness, 1e-12) * std::sqrt(double(cfg.steps)));

  auto optimal_mass = [&] {
    const auto p = policy.probabilities();
    double mass = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (values[i] && std::abs(*values[i] - full.best_objective) <= 1e-9) mass += p[i];
    return mass;
  };
  trace.initial_optimal_mass = optimal_mass();
  trace.initial_eval_loss = bopo_loss(policy, full, cfg.beta);

  std::vector<Solution> batch_solutions(static_cast<std::size_t>(cfg.k));
  std::vector<std::optional<double>> batch_values(static_cast<std::size_t>(cfg.k));
  for (int step = 0; step < cfg.steps; ++step) {
    Rng rng = child_rng(cfg.seed, static_cast<std::uint64_t>(step));
    for (int i = 0; i < cfg.k; ++i) {
      const std::size_t y = policy.sample(rng);
      batch_solutions[i] = support[y];
      batch_values[i] = values[y];
    }
    const PreferenceBatch batch = build_pairs_from_values(batch_solutions, batch_values, cfg.clamp);
    TrainStep rec;
    rec.step = step;
    rec.eval_loss = bopo_loss(policy, full, cfg.beta);
    rec.pairs = static_cast<int>(batch.pairs.size());
    if (!batch.empty()) {
      rec.batch_loss = bopo_loss(policy, batch, cfg.beta);
      const auto grad = bopo_gradient(policy, batch, cfg.beta);
      for (std::size_t i = 0; i < grad.size(); ++i) {
        rec.grad_norm2 += grad[i] * grad[i];
        policy.theta()[i] -= trace.learning_rate * grad[i];
      }
    }
    trace.steps.push_back(rec);
  }
  trace.final_optimal_mass = optimal_mass();
  trace.final_eval_loss = bopo_loss(policy, full, cfg.beta);
  trace.final_theta = policy.theta();
  return trace;
}

}  // namespace cogent
