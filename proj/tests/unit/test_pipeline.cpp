#include <gtest/gtest.h>

#include "cogent/fuzz.hpp"
#include "cogent/generate.hpp"
#include "cogent/parallel.hpp"
#include "cogent/pipeline.hpp"
#include "cogent/sampler.hpp"

using namespace cogent;

namespace {

std::vector<Instance> batch(ProblemKind kind, int size, int count) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) out.push_back(generate_instance(kind, size, default_distribution(kind), 40 + i));
  return out;
}

}  // namespace

TEST(Pipeline, FixedNeverWorseThanSingle) {
  for (auto kind : kAllKinds) {
    const auto insts = batch(kind, kind == ProblemKind::JSSP ? 3 : 7, 5);
    SolveOptions single;
    SolveOptions fixed;
    fixed.mode = SolveMode::Fixed;
    fixed.n_samples = 8;
    const auto a = run_pipeline(insts, single), b = run_pipeline(insts, fixed);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      ASSERT_FALSE(a.records[i].error.has_value());
      EXPECT_TRUE(b.records[i].feasible);
      const double sa = sense_of(kind) == Sense::Minimize ? a.records[i].objective : -a.records[i].objective;
      const double sb = sense_of(kind) == Sense::Minimize ? b.records[i].objective : -b.records[i].objective;
      EXPECT_LE(sb, sa + 1e-9) << kind_name(kind);
      if (b.records[i].oracle) EXPECT_GE(*b.records[i].gap, -1e-9);
      EXPECT_LE(sb, b.records[i].bound + 1e-9);
    }
    EXPECT_EQ(b.aggregates.feasibility_post, 100.0);
  }
}

TEST(Pipeline, AdaptiveWithinLimits) {
  SolveOptions opts;
  opts.mode = SolveMode::Adaptive;
  opts.sampler.n_min = 4;
  opts.sampler.n_max = 12;
  const auto report = run_pipeline(batch(ProblemKind::MVC, 10, 6), opts);
  for (const auto& r : report.records) {
    EXPECT_GE(r.samples_used, 4);
    EXPECT_LE(r.samples_used, 12);
    EXPECT_EQ(r.early_stop, r.samples_used < 12);
  }
}

TEST(Pipeline, ReportDeterministicAndSerialEqualsParallel) {
  const auto insts = batch(ProblemKind::CVRP, 6, 6);
  SolveOptions opts;
  opts.mode = SolveMode::Fixed;
  opts.n_samples = 4;
  const auto parallel = report_to_jsonl(run_pipeline(insts, opts));
  EXPECT_EQ(parallel, report_to_jsonl(run_pipeline(insts, opts)));
  opts.exec = Exec::Serial;
  EXPECT_EQ(parallel, report_to_jsonl(run_pipeline(insts, opts)));
  EXPECT_EQ(parallel.find("seconds"), std::string::npos);
}

TEST(Pipeline, ExtendedObjectiveOnRawPayloads) {
  const auto inst = make_tsp({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  EXPECT_DOUBLE_EQ(extended_objective(inst, Tour{{0, 1, 2, 3}}), 4.0);
  const auto jssp = make_jssp({{{0, 2}, {1, 3}}, {{1, 1}, {0, 1}}});
  EXPECT_EQ(extended_objective(jssp, MachineSchedules{{{2, 1}, {1, 2}}}), 0.0);
}

TEST(Parallel, SerialEqualsParallelKernels) {
  const auto corpus = make_fuzz_corpus(ProblemKind::JSSP, 700, 2);
  const auto s = run_fuzz(corpus, Exec::Serial), p = run_fuzz(corpus, Exec::Parallel);
  EXPECT_EQ(s.cases, p.cases);
  EXPECT_EQ(s.max_locality_ratio, p.max_locality_ratio);
  EXPECT_EQ(s.infeasible_after, p.infeasible_after);
  const auto dist = GapDistribution::parse("weibull:1.5,1");
  EXPECT_EQ(simulate_min_gap(5, dist, 20000, 3, Exec::Serial), simulate_min_gap(5, dist, 20000, 3, Exec::Parallel));
  SamplerConfig cfg;
  EXPECT_EQ(simulate_adaptive_samples(0.8, cfg, 3000, 4, Exec::Serial),
            simulate_adaptive_samples(0.8, cfg, 3000, 4, Exec::Parallel));
  EXPECT_EQ(simulate_rejection_success(0.3, 5, 20000, 5, Exec::Serial),
            simulate_rejection_success(0.3, 5, 20000, 5, Exec::Parallel));
}

TEST(Parallel, FirstExceptionRethrown) {
  EXPECT_THROW(parallel_for(100, Exec::Parallel,
                            [](std::size_t i) {
                              if (i == 37) throw std::runtime_error("x");
                            }),
               std::runtime_error);
}
