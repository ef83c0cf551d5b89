#include <gtest/gtest.h>

#include <cmath>

#include "cogent/error.hpp"
#include "cogent/generate.hpp"
#include "cogent/policies.hpp"
#include "cogent/sampler.hpp"

using namespace cogent;

namespace {

Solution tour(std::vector<int> v) { return Tour{std::move(v)}; }

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(-1);
}

}  // namespace

TEST(Consistency, Examples) {
  const auto a = tour({0, 1, 2}), b = tour({0, 2, 1}), c = tour({1, 0, 2});
  EXPECT_DOUBLE_EQ(consistency(std::vector<Solution>{a, a, a}), 1.0);
  EXPECT_DOUBLE_EQ(consistency(std::vector<Solution>{a, b, c}), 0.0);
  EXPECT_DOUBLE_EQ(consistency(std::vector<Solution>{a, a, b}), 1.0 / 3.0);
  EXPECT_EQ(code_of([&] { consistency(std::vector<Solution>{a}); }), ErrorCode::TooFewSamples);
}

TEST(Confidence, Examples) {
  SamplerConfig cfg;
  const auto best = tour({0, 1, 2}), other = tour({0, 2, 1});
  std::vector<Solution> eight(6, best);
  eight.push_back(other);
  eight.push_back(other);
  EXPECT_DOUBLE_EQ(bayes_confidence(eight, best, cfg), 0.7);
  EXPECT_DOUBLE_EQ(bayes_confidence(std::vector<Solution>{best}, best, cfg), 2.0 / 3.0);
  const std::vector<Solution> many(10000, best);
  EXPECT_NEAR(bayes_confidence(many, best, cfg), 1.0, 1e-3);
  EXPECT_EQ(code_of([&] { bayes_confidence(std::vector<Solution>{other}, best, cfg); }), ErrorCode::BestNotInSamples);
}

TEST(Adaptive, ScriptedStopsAtMinimum) {
  const auto inst = make_tsp({{0, 0}, {1, 0}, {0, 1}});
  const ScriptedPolicy policy("Route: [0, 1, 2], Objective: 3.41");
  DecodeConfig dc;
  SamplerConfig cfg;
  const auto [best, trace] = adaptive_best_of_n(inst, policy, dc, cfg);
  EXPECT_EQ(trace.samples_used, 8);
  EXPECT_TRUE(trace.terminated_early);
  EXPECT_DOUBLE_EQ(trace.confidence, 0.9);
  EXPECT_EQ(best, tour({0, 1, 2}));
}

TEST(Adaptive, UniformRunsToMaximum) {
  const auto inst = generate_instance(ProblemKind::TSP, 12, Distribution::Uniform, 3);
  const UniformValidPolicy policy;
  SamplerConfig cfg;
  cfg.n_max = 24;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    DecodeConfig dc;
    dc.seed = seed * 1000;
    dc.temperature = 1.0;
    const auto [best, trace] = adaptive_best_of_n(inst, policy, dc, cfg);
    EXPECT_EQ(trace.samples_used, 24);
    EXPECT_FALSE(trace.terminated_early);
    EXPECT_TRUE(check_feasibility(inst, best).feasible);
  }
}

TEST(Adaptive, SingleSampleDegenerate) {
  const auto inst = generate_instance(ProblemKind::CVRP, 6, Distribution::Uniform, 1);
  const UniformValidPolicy policy;
  SamplerConfig cfg;
  cfg.n_min = cfg.n_max = 1;
  DecodeConfig dc;
  const auto [best, trace] = adaptive_best_of_n(inst, policy, dc, cfg);
  EXPECT_EQ(trace.samples_used, 1);
  EXPECT_EQ(best, trace.samples[0].repaired);
  EXPECT_TRUE(check_feasibility(inst, best).feasible);
}

TEST(Adaptive, InvalidConfig) {
  SamplerConfig cfg;
  cfg.n_min = 10;
  cfg.n_max = 5;
  EXPECT_THROW(validate(cfg), Error);
}

TEST(BestOfN, BestIsMinimumOfSamples) {
  const auto inst = generate_instance(ProblemKind::PFSP, 6, Distribution::Taillard, 2);
  const HeuristicPolicy policy(inst);
  DecodeConfig dc;
  const auto [best, trace] = best_of_n(inst, policy, dc, 10);
  ASSERT_EQ(trace.samples.size(), 10u);
  double lo = 1e300;
  for (const auto& s : trace.samples) lo = std::min(lo, s.objective);
  EXPECT_DOUBLE_EQ(objective(inst, best), lo);
}

TEST(Bounds, RejectionSamples) {
  EXPECT_EQ(expected_rejection_samples(0.5, 0.01), 7);
  EXPECT_EQ(expected_rejection_samples(0.5, 0.999999), 1);
  EXPECT_EQ(code_of([] { expected_rejection_samples(0.0, 0.1); }), ErrorCode::DomainError);
  EXPECT_GE(simulate_rejection_success(0.5, 7, 100000, 1, Exec::Parallel), 0.99);
}

TEST(Bounds, AdaptiveBound) {
  EXPECT_NEAR(adaptive_bound(0.8, 8, 64), 8.0 + 56.0 * std::pow(0.2, 8) / 0.8, 1e-12);
  EXPECT_NEAR(adaptive_bound(0.8, 8, 64), 8.00018, 1e-5);
  EXPECT_NEAR(adaptive_bound(1.0 - 1e-12, 8, 64), 8.0, 1e-9);
  EXPECT_EQ(code_of([] { adaptive_bound(1.5, 8, 64); }), ErrorCode::DomainError);
}

TEST(Bounds, AdaptiveSimulationUsesAtLeastMinimum) {
  SamplerConfig cfg;
  const double mean = simulate_adaptive_samples(0.8, cfg, 2000, 3, Exec::Parallel);
  EXPECT_GE(mean, 8.0);
  EXPECT_LE(mean, 64.0);
  cfg.tau = 0.75;
  const double looser = simulate_adaptive_samples(0.8, cfg, 2000, 3, Exec::Parallel);
  EXPECT_LT(looser, mean);
  cfg.tau = 0.1;
  EXPECT_DOUBLE_EQ(simulate_adaptive_samples(0.8, cfg, 2000, 3, Exec::Parallel), 8.0);
}

TEST(MinGap, ExponentialClosedForm) {
  const auto dist = GapDistribution::parse("exp:1");
  EXPECT_NEAR(expected_gap(4, dist), 0.25, 1e-12);
  EXPECT_NEAR(expected_gap(1, dist), 1.0, 1e-12);
  EXPECT_NEAR(simulate_min_gap(8, dist, 100000, 7, Exec::Parallel), 0.125, 0.125 * 0.05);
}

TEST(MinGap, QuadratureMatchesClosedForms) {
  // Uniform(0, u): E[min] = u / (N + 1). Weibull(k, s): s * Gamma(1 + 1/k) * N^(-1/k).
  EXPECT_NEAR(expected_gap(3, GapDistribution::parse("uniform:2")), 0.5, 1e-8);
  EXPECT_NEAR(expected_gap(5, GapDistribution::parse("weibull:2,1")), std::tgamma(1.5) / std::sqrt(5.0), 1e-8);
  EXPECT_THROW(GapDistribution::parse("cauchy:1"), Error);
}

TEST(ConsistencyLemma, Examples) {
  const std::vector<double> one{1.0}, half{0.5, 0.5}, quarter{0.25, 0.25, 0.25, 0.25};
  EXPECT_DOUBLE_EQ(consistency_expectation_check(one, 2, 100, 1).analytic, 1.0);
  const auto h = consistency_expectation_check(half, 2, 100000, 1);
  EXPECT_DOUBLE_EQ(h.analytic, 0.5);
  EXPECT_NEAR(h.empirical, 0.5, 0.01);
  EXPECT_DOUBLE_EQ(consistency_expectation_check(quarter, 2, 10, 1).analytic, 0.25);
}
