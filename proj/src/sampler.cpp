#include "cogent/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cogent/error.hpp"
#include "cogent/solution_text.hpp"

namespace cogent {

void validate(const SamplerConfig& cfg) {
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw Error(ErrorCode::DomainError, "need 1 <= n_min <= n_max");
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0)) throw Error(ErrorCode::DomainError, "tau must lie in (0, 1)");
  if (!(cfg.alpha0 > 0.0 && cfg.beta0 > 0.0)) throw Error(ErrorCode::DomainError, "priors must be positive");
  if (cfg.batch < 1) throw Error(ErrorCode::DomainError, "batch must be positive");
}

double consistency(std::span<const Solution> samples) {
  const std::size_t k = samples.size();
  if (k < 2) throw Error(ErrorCode::TooFewSamples, "consistency needs at least two samples");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& s : samples) ++counts[solution_key(s)];
  double equal_pairs = 0.0;
  for (const auto& [key, c] : counts) equal_pairs += static_cast<double>(c) * static_cast<double>(c - 1);
  return equal_pairs / (static_cast<double>(k) * static_cast<double>(k - 1));
}

double bayes_confidence(std::span<const Solution> samples, const Solution& best, const SamplerConfig& cfg) {
  const auto n_best = std::count_if(samples.begin(), samples.end(),
                                    [&](const Solution& s) { return same_solution(s, best); });
  if (n_best == 0) throw Error(ErrorCode::BestNotInSamples, "best solution does not occur among the samples");
  return (cfg.alpha0 + static_cast<double>(n_best)) /
         (cfg.alpha0 + cfg.beta0 + static_cast<double>(samples.size()));
}

StopResult adaptive_stopping(const std::function<void(int, int)>& draw, const std::function<double(std::size_t)>& key,
                             const std::function<bool(std::size_t, std::size_t)>& equal, const SamplerConfig& cfg) {
  validate(cfg);
  StopResult out;
  int n = 0;
  auto evaluate = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < static_cast<std::size_t>(n); ++i) {
      if (key(i) < key(best)) best = i;
    }
    int n_best = 0;
    for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) n_best += equal(i, best);
    out.best_index = best;
    out.confidence = (cfg.alpha0 + n_best) / (cfg.alpha0 + cfg.beta0 + n);
  };
  while (n < cfg.n_max) {
    // Nothing is checked before n_min, so the first n_min samples form one batch.
    const int want = n < cfg.n_min ? cfg.n_min - n : cfg.batch;
    const int count = std::min(want, cfg.n_max - n);
    draw(n, count);
    n += count;
    evaluate();
    if (out.confidence >= cfg.tau && n < cfg.n_max) {
      out.terminated_early = true;
      break;
    }
  }
  out.samples_used = n;
  return out;
}

SampleRecord draw_sample(const Instance& instance, const PolicySource& policy, const DecodeConfig& decode_cfg,
                         int index) {
  DecodeConfig cfg = decode_cfg;
  cfg.seed = decode_cfg.seed + static_cast<std::uint64_t>(index);
  SampleRecord rec;
  rec.text = decode(policy, instance, cfg);
  rec.raw = parse_solution(instance.kind, instance.size(), rec.text);
  const RepairOutcome fixed = repair(instance, rec.raw);
  rec.repaired = fixed.repaired;
  rec.magnitude = fixed.input_magnitude;
  rec.feasible_before = fixed.input_magnitude == 0.0;
  rec.distance_moved = fixed.distance_moved;
  rec.objective = objective(instance, rec.repaired);
  return rec;
}

namespace {

struct RecordStore {
  std::vector<SampleRecord> records;
  std::vector<std::string> keys;
  std::vector<double> min_keys;
};

void fill(RecordStore& store, const Instance& instance, const PolicySource& policy, const DecodeConfig& decode_cfg,
          int first, int count, Exec exec) {
  const auto end = static_cast<std::size_t>(first + count);
  store.records.resize(end);
  store.keys.resize(end);
  store.min_keys.resize(end);
  const bool maximize = sense_of(instance.kind) == Sense::Maximize;
  parallel_for(static_cast<std::size_t>(count), exec, [&](std::size_t k) {
    const std::size_t i = static_cast<std::size_t>(first) + k;
    store.records[i] = draw_sample(instance, policy, decode_cfg, static_cast<int>(i));
    store.keys[i] = solution_key(store.records[i].repaired);
    store.min_keys[i] = maximize ? -store.records[i].objective : store.records[i].objective;
  });
}

}  // namespace

std::pair<Solution, SampleTrace> adaptive_best_of_n(const Instance& instance, const PolicySource& policy,
                                                    const DecodeConfig& decode_cfg, const SamplerConfig& cfg) {
  RecordStore store;
  auto draw = [&](int first, int count) { fill(store, instance, policy, decode_cfg, first, count, cfg.exec); };
  auto key = [&](std::size_t i) { return store.min_keys[i]; };
  auto equal = [&](std::size_t a, std::size_t b) {
    return cfg.match_by_objective ? same_objective(store.min_keys[a], store.min_keys[b]) : store.keys[a] == store.keys[b];
  };
  const StopResult stop = adaptive_stopping(draw, key, equal, cfg);
  SampleTrace trace;
  trace.samples = std::move(store.records);
  trace.samples_used = stop.samples_used;
  trace.terminated_early = stop.terminated_early;
  trace.confidence = stop.confidence;
  trace.best_index = stop.best_index;
  Solution best = trace.samples[stop.best_index].repaired;
  return {std::move(best), std::move(trace)};
}

std::pair<Solution, SampleTrace> best_of_n(const Instance& instance, const PolicySource& policy,
                                           const DecodeConfig& decode_cfg, int n, Exec exec) {
  if (n < 1) throw Error(ErrorCode::DomainError, "need at least one sample");
  RecordStore store;
  fill(store, instance, policy, decode_cfg, 0, n, exec);
  SampleTrace trace;
  for (std::size_t i = 1; i < store.min_keys.size(); ++i) {
    if (store.min_keys[i] < store.min_keys[trace.best_index]) trace.best_index = i;
  }
  trace.samples = std::move(store.records);
  trace.samples_used = n;
  Solution best = trace.samples[trace.best_index].repaired;
  return {std::move(best), std::move(trace)};
}

int expected_rejection_samples(double p_f, double delta) {
  if (!(p_f > 0.0 && p_f < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::DomainError, "p_f and delta must lie in (0, 1)");
  }
  const double n = std::log(1.0 / delta) / std::log(1.0 / (1.0 - p_f));
  return std::max(1, static_cast<int>(std::ceil(n - 1e-12)));
}

double adaptive_bound(double q, int n_min, int n_max) {
  if (!(q > 0.0 && q < 1.0)) throw Error(ErrorCode::DomainError, "q must lie in (0, 1)");
  if (n_min < 1 || n_max < n_min) throw Error(ErrorCode::DomainError, "need 1 <= n_min <= n_max");
  return n_min + (n_max - n_min) * std::pow(1.0 - q, n_min) / q;
}

GapDistribution GapDistribution::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string part;
    while (std::getline(ss, part, ',')) params.push_back(std::stod(part));
  }
  GapDistribution d;
  if (name == "exp" && params.size() == 1) d = {Family::Exponential, params[0], 1.0};
  else if (name == "uniform" && params.size() == 1) d = {Family::Uniform, params[0], 1.0};
  else if (name == "weibull" && params.size() == 2) d = {Family::Weibull, params[0], params[1]};
  else throw Error(ErrorCode::UnsupportedDistribution, "unsupported gap distribution '" + spec + "'");
  if (!(d.a > 0.0 && d.b > 0.0)) throw Error(ErrorCode::InvalidDistribution, "parameters must be positive");
  return d;
}

double GapDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  switch (family) {
    case Family::Exponential: return -std::expm1(-a * x);
    case Family::Uniform: return std::min(1.0, x / a);
    case Family::Weibull: return -std::expm1(-std::pow(x / b, a));
  }
  return 0.0;
}

double GapDistribution::sample(Rng& rng) const {
  switch (family) {
    case Family::Exponential: return exponential(rng, a);
    case Family::Uniform: return a * uniform01(rng);
    case Family::Weibull: return b * std::pow(-std::log1p(-uniform01(rng)), 1.0 / a);
  }
  return 0.0;
}

double expected_gap(int n, const GapDistribution& dist) {
  if (n < 1) throw Error(ErrorCode::DomainError, "N must be at least 1");
  if (!(dist.a > 0.0 && dist.b > 0.0)) throw Error(ErrorCode::InvalidDistribution, "parameters must be positive");
  const double power = n;
  auto survival = [&](double x) { return std::pow(1.0 - dist.cdf(x), power); };
  switch (dist.family) {
    case GapDistribution::Family::Exponential: return 1.0 / (power * dist.a);
    case GapDistribution::Family::Uniform:
      return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(survival, 0.0, dist.a, 15, 1e-12);
    case GapDistribution::Family::Weibull: {
      boost::math::quadrature::exp_sinh<double> integrator;
      return integrator.integrate([&](double x) { return std::exp(-power * std::pow(x / dist.b, dist.a)); });
    }
  }
  throw Error(ErrorCode::UnsupportedDistribution, "unknown family");
}

double simulate_min_gap(int n, const GapDistribution& dist, int trials, std::uint64_t seed, Exec exec) {
  if (n < 1 || trials < 1) throw Error(ErrorCode::DomainError, "need n >= 1 and trials >= 1");
  std::vector<double> mins(static_cast<std::size_t>(trials));
  parallel_for(mins.size(), exec, [&](std::size_t t) {
    Rng rng = child_rng(seed, t);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) m = std::min(m, dist.sample(rng));
    mins[t] = m;
  });
  return std::accumulate(mins.begin(), mins.end(), 0.0) / trials;
}

ConsistencyCheck consistency_expectation_check(std::span<const double> probs, int k, int trials, std::uint64_t seed,
                                               Exec exec) {
  if (probs.empty()) throw Error(ErrorCode::InvalidDistribution, "empty distribution");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidDistribution, "probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidDistribution, "probabilities must sum to 1");
  if (k < 2) throw Error(ErrorCode::TooFewSamples, "need K >= 2");
  if (trials < 1) throw Error(ErrorCode::DomainError, "need at least one trial");

  ConsistencyCheck out;
  for (double p : probs) out.analytic += p * p;

  std::vector<double> cumulative(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
  std::vector<long long> equal_pairs(static_cast<std::size_t>(trials));
  parallel_for(equal_pairs.size(), exec, [&](std::size_t t) {
    Rng rng = child_rng(seed, t);
    std::vector<long long> counts(probs.size(), 0);
    for (int i = 0; i < k; ++i) {
      const double u = uniform01(rng) * total;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      ++counts[static_cast<std::size_t>(it - cumulative.begin())];
    }
    long long pairs = 0;
    for (long long c : counts) pairs += c * (c - 1);
    equal_pairs[t] = pairs;
  });
  const long long sum = std::accumulate(equal_pairs.begin(), equal_pairs.end(), 0LL);
  out.empirical = static_cast<double>(sum) / (static_cast<double>(trials) * k * (k - 1));
  return out;
}

double simulate_rejection_success(double p_f, int n, int trials, std::uint64_t seed, Exec exec) {
  std::vector<char> ok(static_cast<std::size_t>(trials), 0);
  parallel_for(ok.size(), exec, [&](std::size_t t) {
    Rng rng = child_rng(seed, t);
    for (int i = 0; i < n && !ok[t]; ++i) ok[t] = bernoulli(rng, p_f);
  });
  return static_cast<double>(std::count(ok.begin(), ok.end(), 1)) / trials;
}

double simulate_adaptive_samples(double q, const SamplerConfig& cfg, int runs, std::uint64_t seed, Exec exec) {
  validate(cfg);
  std::vector<int> used(static_cast<std::size_t>(runs));
  parallel_for(used.size(), exec, [&](std::size_t r) {
    Rng rng = child_rng(seed, r);
    // label 0 is the optimum; every miss is a fresh, strictly worse solution.
    std::vector<long> labels;
    std::vector<double> values;
    auto draw = [&](int first, int count) {
      for (int i = first; i < first + count; ++i) {
        const bool hit = bernoulli(rng, q);
        labels.push_back(hit ? 0 : i + 1);
        values.push_back(hit ? 0.0 : 1.0 + uniform01(rng));
      }
    };
    auto key = [&](std::size_t i) { return values[i]; };
    auto equal = [&](std::size_t a, std::size_t b) {
      return cfg.match_by_objective ? same_objective(values[a], values[b]) : labels[a] == labels[b];
    };
    SamplerConfig serial = cfg;
    serial.exec = Exec::Serial;
    used[r] = adaptive_stopping(draw, key, equal, serial).samples_used;
  });
  return static_cast<double>(std::accumulate(used.begin(), used.end(), 0LL)) / runs;
}

}  // namespace cogent
