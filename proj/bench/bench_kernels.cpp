#include <benchmark/benchmark.h>

#include "cogent/decoder.hpp"
#include "cogent/fuzz.hpp"
#include "cogent/generate.hpp"
#include "cogent/oracle.hpp"
#include "cogent/pda.hpp"
#include "cogent/policies.hpp"
#include "cogent/sampler.hpp"

using namespace cogent;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void BM_RepairFuzz(benchmark::State& state) {
  const auto corpus = make_fuzz_corpus(ProblemKind::CVRP, 2000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(run_fuzz(corpus, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_RepairFuzz)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MinGapMonteCarlo(benchmark::State& state) {
  const auto dist = GapDistribution::parse("exp:1");
  for (auto _ : state) benchmark::DoNotOptimize(simulate_min_gap(8, dist, 100'000, 3, exec_of(state)));
}
BENCHMARK(BM_MinGapMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ConsistencyMonteCarlo(benchmark::State& state) {
  const std::vector<double> p = {0.25, 0.25, 0.25, 0.25};
  for (auto _ : state) benchmark::DoNotOptimize(consistency_expectation_check(p, 2, 100'000, 3, exec_of(state)));
}
BENCHMARK(BM_ConsistencyMonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BruteForceTsp9(benchmark::State& state) {
  const auto inst = generate_instance(ProblemKind::TSP, 9, Distribution::Uniform, 5);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(inst, exec_of(state)));
}
BENCHMARK(BM_BruteForceTsp9)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BestOfN(benchmark::State& state) {
  const auto inst = generate_instance(ProblemKind::TSP, 20, Distribution::Uniform, 9);
  const HeuristicPolicy policy(inst);
  DecodeConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(best_of_n(inst, policy, cfg, 16, exec_of(state)));
}
BENCHMARK(BM_BestOfN)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Masking cost per decoded token for growing index ranges.
void BM_MaskPerToken(benchmark::State& state) {
  const auto inst = generate_instance(ProblemKind::TSP, static_cast<int>(state.range(0)), Distribution::Uniform, 2);
  const UniformValidPolicy policy;
  DecodeConfig cfg;
  std::int64_t tokens = 0;
  for (auto _ : state) {
    ++cfg.seed;
    tokens += static_cast<std::int64_t>(decode_tokens(policy, inst, cfg).tokens.size());
  }
  state.SetItemsProcessed(tokens);
}
BENCHMARK(BM_MaskPerToken)->Arg(10)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
