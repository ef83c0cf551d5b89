#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogent/decoder.hpp"
#include "cogent/parallel.hpp"
#include "cogent/problem.hpp"
#include "cogent/repair.hpp"

namespace cogent {

struct SamplerConfig {
  int n_min = 8;
  int n_max = 64;
  double tau = 0.85;
  double alpha0 = 1.0;
  double beta0 = 1.0;
  /// Count samples whose objective equals the best one (relative tolerance 1e-9) as
  /// matches, instead of exact canonical equality.
  bool match_by_objective = false;
  /// Draw this many samples between stopping checks (1 = check after every sample).
  int batch = 1;
  Exec exec = Exec::Serial;
};

void validate(const SamplerConfig& cfg);

/// Objective equality up to a relative tolerance of 1e-9 (absorbs summation order).
inline bool same_objective(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

struct SampleRecord {
  std::string text;
  Solution raw;
  Solution repaired;
  double objective = 0.0;      // of the repaired solution
  bool feasible_before = false;
  double magnitude = 0.0;      // violation magnitude of the raw solution
  double distance_moved = 0.0;
};

struct SampleTrace {
  std::vector<SampleRecord> samples;
  int samples_used = 0;
  bool terminated_early = false;
  double confidence = 0.0;
  std::size_t best_index = 0;
};

/// Fraction of ordered pairs (i != j) with canonically equal solutions. Needs K >= 2.
double consistency(std::span<const Solution> samples);

/// (alpha0 + n_best) / (alpha0 + beta0 + n). Throws BestNotInSamples.
double bayes_confidence(std::span<const Solution> samples, const Solution& best, const SamplerConfig& cfg);

/// Stopping loop over an abstract sample stream. draw(i) produces sample i; key(i)
/// its min-sense objective. Returns (samples_used, terminated_early, confidence,
/// best_index). Solutions are compared with `equal`.
struct StopResult {
  int samples_used = 0;
  bool terminated_early = false;
  double confidence = 0.0;
  std::size_t best_index = 0;
};
StopResult adaptive_stopping(const std::function<void(int first, int count)>& draw,
                             const std::function<double(std::size_t)>& key,
                             const std::function<bool(std::size_t, std::size_t)>& equal, const SamplerConfig& cfg);

/// One decode, parse and repair with child seed decode_cfg.seed + index.
SampleRecord draw_sample(const Instance& instance, const PolicySource& policy, const DecodeConfig& decode_cfg,
                         int index);

/// Adaptive Best-of-N: sample, repair, and stop once the Beta-Binomial confidence of the
/// best solution reaches tau (checked from n_min on) or n_max samples are drawn.
std::pair<Solution, SampleTrace> adaptive_best_of_n(const Instance& instance, const PolicySource& policy,
                                                    const DecodeConfig& decode_cfg, const SamplerConfig& cfg);

/// Fixed-N Best-of-N (no early stop).
std::pair<Solution, SampleTrace> best_of_n(const Instance& instance, const PolicySource& policy,
                                           const DecodeConfig& decode_cfg, int n, Exec exec = Exec::Serial);

/// ceil(log(1/delta) / log(1/(1 - p_f))). Throws DomainError outside (0, 1).
int expected_rejection_samples(double p_f, double delta);

/// N_min + (N_max - N_min) (1 - q)^N_min / q. Throws DomainError for q outside (0, 1).
double adaptive_bound(double q, int n_min, int n_max);

struct GapDistribution {
  enum class Family { Exponential, Uniform, Weibull };
  Family family = Family::Exponential;
  double a = 1.0;  // exponential rate; uniform upper bound; Weibull shape
  double b = 1.0;  // Weibull scale

  /// "exp:<rate>", "uniform:<upper>", "weibull:<shape>,<scale>"; anything else throws
  /// UnsupportedDistribution.
  static GapDistribution parse(const std::string& spec);
  double cdf(double x) const;
  double sample(Rng& rng) const;
};

/// E[min of N iid gaps] = integral of (1 - F)^N. Closed form for exponential, numeric
/// quadrature otherwise.
double expected_gap(int n, const GapDistribution& dist);

/// Monte Carlo mean of the minimum of n draws.
double simulate_min_gap(int n, const GapDistribution& dist, int trials, std::uint64_t seed, Exec exec);

/// Lemma check: analytic sum p^2 against the mean consistency of K iid draws.
struct ConsistencyCheck {
  double empirical = 0.0;
  double analytic = 0.0;
};
ConsistencyCheck consistency_expectation_check(std::span<const double> probs, int k, int trials, std::uint64_t seed,
                                               Exec exec = Exec::Parallel);

/// Monte Carlo success probability of drawing at least one feasible sample in n tries.
double simulate_rejection_success(double p_f, int n, int trials, std::uint64_t seed, Exec exec);

/// Adaptive stopping on a synthetic stream whose samples hit one fixed optimum with
/// probability q and are otherwise distinct worse solutions. Returns mean samples_used.
double simulate_adaptive_samples(double q, const SamplerConfig& cfg, int runs, std::uint64_t seed, Exec exec);

}  // namespace cogent
