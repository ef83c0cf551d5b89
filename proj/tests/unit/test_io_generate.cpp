#include <gtest/gtest.h>

#include <filesystem>

#include "cogent/error.hpp"
#include "cogent/fuzz.hpp"
#include "cogent/generate.hpp"
#include "cogent/instance_io.hpp"

using namespace cogent;

namespace {
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

TEST(InstanceIo, RoundTripAllKinds) {
  for (auto kind : kAllKinds) {
    const auto inst = generate_instance(kind, 7, default_distribution(kind), 12);
    const auto text = serialize_instance(inst);
    EXPECT_EQ(parse_instance(text), inst) << text;
    EXPECT_EQ(serialize_instance(parse_instance(text)), text);
  }
}

TEST(InstanceIo, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "cogent_io_test";
  std::filesystem::create_directories(dir);
  const auto inst = generate_instance(ProblemKind::JSSP, 3, Distribution::Taillard, 4);
  save_instance(dir / "a.json", inst);
  EXPECT_EQ(load_instance(dir / "a.json"), inst);
  std::filesystem::remove_all(dir);
}

TEST(InstanceIo, SchemaErrors) {
  EXPECT_EQ(code_of([] { parse_instance("{not json"); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([] { parse_instance(R"({"kind":"TSP"})"); }), ErrorCode::FormatError);
  EXPECT_EQ(code_of([] { parse_instance(R"({"kind":"knapsack","id":"x","seed":0})"); }), ErrorCode::UnsupportedKind);
}

TEST(Generate, DeterministicPerSeed) {
  for (auto kind : kAllKinds) {
    const auto dist = default_distribution(kind);
    EXPECT_EQ(generate_instance(kind, 9, dist, 5), generate_instance(kind, 9, dist, 5));
    EXPECT_NE(generate_instance(kind, 9, dist, 5), generate_instance(kind, 9, dist, 6));
  }
}

TEST(Generate, Bounds) {
  for (int seed = 0; seed < 20; ++seed) {
    const auto tsp = generate_instance(ProblemKind::TSP, 20, Distribution::GaussianMixture, seed);
    for (const auto& p : tsp.as<TspData>().coords) {
      EXPECT_GE(p.x, 0.0);
      EXPECT_LE(p.x, 1.0);
      EXPECT_GE(p.y, 0.0);
      EXPECT_LE(p.y, 1.0);
    }
    const auto cvrp = generate_instance(ProblemKind::CVRP, 20, Distribution::Uniform, seed);
    const auto& c = cvrp.as<CvrpData>();
    EXPECT_EQ(c.coords.size(), 20u);  // size counts the depot
    EXPECT_EQ(c.demands[0], 0.0);
    for (std::size_t i = 1; i < c.demands.size(); ++i) {
      EXPECT_GE(c.demands[i], 1.0);
      EXPECT_LE(c.demands[i], c.capacity);
    }
    const auto op = generate_instance(ProblemKind::OP, 20, Distribution::Uniform, seed);
    EXPECT_EQ(op.as<OpData>().budget, op_budget_for(20));
    const auto ba = generate_instance(ProblemKind::MIS, 20, Distribution::BarabasiAlbert, seed);
    EXPECT_EQ(ba.as<GraphData>().num_vertices, 20);
    EXPECT_EQ(ba.as<GraphData>().edges.size(), 6u + 16u * 3u);
    const auto jssp = generate_instance(ProblemKind::JSSP, 4, Distribution::Taillard, seed);
    for (const auto& job : jssp.as<JsspData>().ops) {
      std::vector<bool> seen(3, false);
      for (const auto& op2 : job) seen[op2.machine] = true;
      EXPECT_EQ(std::count(seen.begin(), seen.end(), true), 3);
    }
  }
}

TEST(Generate, DistributionErrors) {
  EXPECT_EQ(code_of([] { parse_distribution("zipf"); }), ErrorCode::UnsupportedDistribution);
  EXPECT_THROW(generate_instance(ProblemKind::TSP, 5, Distribution::ErdosRenyi, 1), Error);
  EXPECT_THROW(generate_instance(ProblemKind::MIS, 5, Distribution::Taillard, 1), Error);
  EXPECT_EQ(parse_distribution("ba"), Distribution::BarabasiAlbert);
}

TEST(Fuzz, CorpusDeterministicAndCoversFamilies) {
  const auto a = make_fuzz_corpus(ProblemKind::CVRP, 700, 3);
  const auto b = make_fuzz_corpus(ProblemKind::CVRP, 700, 3);
  ASSERT_EQ(a.cases.size(), 700u);
  std::vector<int> families(kFuzzFamilyCount, 0);
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    EXPECT_EQ(a.cases[i].input, b.cases[i].input);
    ++families[static_cast<int>(a.cases[i].family)];
  }
  for (int f : families) EXPECT_EQ(f, 100);
}

TEST(Fuzz, RepairPassesOnEveryKind) {
  for (auto kind : kAllKinds) {
    const auto summary = run_fuzz(make_fuzz_corpus(kind, 700, 8));
    EXPECT_TRUE(summary.feasibility_ok()) << kind_name(kind) << " " << summary.first_failure;
    EXPECT_TRUE(summary.locality_ok()) << kind_name(kind) << " " << summary.first_failure;
    EXPECT_EQ(summary.not_idempotent, 0);
  }
}

TEST(Fuzz, SkipSplitMutationDetected) {
  RepairOptions broken;
  broken.skip_split = true;
  const auto summary = run_fuzz(make_fuzz_corpus(ProblemKind::CVRP, 700, 8), Exec::Parallel, broken);
  EXPECT_FALSE(summary.feasibility_ok());
}
