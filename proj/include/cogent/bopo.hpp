#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cogent/problem.hpp"
#include "cogent/random.hpp"

namespace cogent {

struct PreferencePair {
  Solution inferior;
  double gap = 0.0;     // f(inferior) - f(best), min-sense
  double weight = 1.0;  // normalized gap
};

struct PreferenceBatch {
  Solution best;
  double best_objective = 0.0;  // min-sense
  std::vector<PreferencePair> pairs;
  int feasible_count = 0;
  double mean_gap = 0.0;

  bool empty() const { return pairs.empty(); }
};

/// Keeps feasible samples, anchors on the first minimum, and pairs it with every other
/// distinct feasible solution whose gap is positive. Weights are gap / mean gap, clamped
/// to [1/clamp, clamp] and rescaled so their mean stays 1.
PreferenceBatch build_pairs(const Instance& instance, std::span<const Solution> samples, double clamp = 10.0);

/// Same construction from precomputed min-sense objectives (nullopt marks infeasible).
PreferenceBatch build_pairs_from_values(std::span<const Solution> samples,
                                        std::span<const std::optional<double>> values, double clamp = 10.0);

/// Normalizes raw gaps to mean 1 under the clamp.
std::vector<double> normalized_weights(std::span<const double> gaps, double clamp);

/// Softmax policy over an enumerated solution set: log pi(y) = theta_y - logsumexp(theta).
class ToySoftmaxPolicy {
 public:
  explicit ToySoftmaxPolicy(std::vector<Solution> support);
  ToySoftmaxPolicy(std::vector<Solution> support, std::vector<double> theta);

  std::size_t size() const { return support_.size(); }
  const std::vector<Solution>& support() const { return support_; }
  const std::vector<double>& theta() const { return theta_; }
  std::vector<double>& theta() { return theta_; }

  /// Index of a solution in the support (canonical equality); throws InvalidSolution.
  std::size_t index_of(const Solution& s) const;
  double log_prob(std::size_t index) const;
  std::vector<double> probabilities() const;
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<Solution> support_;
  std::vector<std::string> keys_;
  std::vector<double> theta_;
};

/// -(1/P) sum_i w_i log sigmoid(beta * (log pi(y*) - log pi(y_i))). Throws EmptyBatch.
double bopo_loss(const ToySoftmaxPolicy& policy, const PreferenceBatch& batch, double beta);
std::vector<double> bopo_gradient(const ToySoftmaxPolicy& policy, const PreferenceBatch& batch, double beta);

double dpo_loss(const ToySoftmaxPolicy& policy, const Solution& preferred, const Solution& rejected, double beta);
std::vector<double> dpo_gradient(const ToySoftmaxPolicy& policy, const Solution& preferred, const Solution& rejected,
                                 double beta);

/// Advantages (r - mean) / (std + 1e-8); loss -(1/K) sum A_i log pi(y_i). Throws
/// DegenerateRewards for empty or mismatched inputs.
std::vector<double> grpo_advantages(std::span<const double> rewards);
double grpo_loss(const ToySoftmaxPolicy& policy, std::span<const Solution> samples, std::span<const double> rewards);
std::vector<double> grpo_gradient(const ToySoftmaxPolicy& policy, std::span<const Solution> samples,
                                  std::span<const double> rewards);

struct TrainConfig {
  int steps = 400;
  std::optional<double> learning_rate;  // default 1 / (L sqrt(T))
  double beta = 0.1;
  int k = 8;
  std::uint64_t seed = 0;
  double clamp = 10.0;
  int probe_pairs = 100;
};

struct TrainStep {
  int step = 0;
  double batch_loss = 0.0;  // 0 for an empty batch
  double grad_norm2 = 0.0;
  double eval_loss = 0.0;   // loss on the full support, before the update
  int pairs = 0;
};

struct TrainTrace {
  std::vector<TrainStep> steps;
  double learning_rate = 0.0;
  double smoothness = 0.0;
  double initial_optimal_mass = 0.0;
  double final_optimal_mass = 0.0;
  double initial_eval_loss = 0.0;
  double final_eval_loss = 0.0;
  std::vector<double> final_theta;
};

/// Batch over the whole support: every feasible solution paired with the optimum.
PreferenceBatch full_support_batch(const Instance& instance, const ToySoftmaxPolicy& policy, double clamp = 10.0);

/// Smoothness estimate: largest ratio |grad(a) - grad(b)| / |a - b| of the full-support
/// loss over random parameter probes.
double estimate_smoothness(const ToySoftmaxPolicy& policy, const PreferenceBatch& batch, double beta, int probes,
                           std::uint64_t seed);

/// SGD on the BOPO loss of batches of K samples drawn from the current policy.
TrainTrace train_toy(const Instance& instance, ToySoftmaxPolicy policy, const TrainConfig& cfg);

}  // namespace cogent
