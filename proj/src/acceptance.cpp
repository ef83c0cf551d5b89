#include "cogent/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>

#include "cogent/bopo.hpp"
#include "cogent/decoder.hpp"
#include "cogent/error.hpp"
#include "cogent/generate.hpp"
#include "cogent/oracle.hpp"
#include "cogent/pipeline.hpp"
#include "cogent/policies.hpp"
#include "cogent/sampler.hpp"
#include "cogent/solution_text.hpp"

namespace cogent {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

constexpr const char* kNames[kCriterionCount] = {
    "repair-feasibility",  "format-validity",     "repair-idempotence",   "repair-locality",
    "tsp-repair-quality",  "consistency-lemma",   "min-gap-decay",        "rejection-sampling",
    "adaptive-samples",    "preference-gradients", "toy-training-trend",  "oracle-equivalence"};

CriterionResult make(int id, bool pass, std::string detail) {
  return {id, std::string(kNames[id - 1]), pass, std::move(detail), 0.0};
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

/// Central differences of f at theta.
template <typename F>
std::vector<double> numeric_gradient(const ToySoftmaxPolicy& policy, F&& f) {
  constexpr double h = 1e-5;
  std::vector<double> g(policy.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto th = policy.theta();
    th[i] += h;
    const double up = f(ToySoftmaxPolicy(policy.support(), th));
    th[i] -= 2 * h;
    const double down = f(ToySoftmaxPolicy(policy.support(), th));
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

double relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric) {
  std::vector<double> diff(analytic.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = analytic[i] - numeric[i];
  return norm2(diff) / std::max(norm2(numeric), 1e-8);
}

Instance oracle_sized_instance(ProblemKind kind, int index, std::uint64_t seed) {
  Rng rng = child_rng(seed, 2'000'000 + static_cast<std::uint64_t>(index));
  auto draw = [&](int lo, int hi) { return static_cast<int>(uniform_int(rng, lo, hi)); };
  GenerateOptions opts;
  int size = 0;
  switch (kind) {
    case ProblemKind::TSP: size = draw(3, 8); break;
    case ProblemKind::OP: size = draw(3, 10); break;
    case ProblemKind::CVRP: size = draw(3, 7); break;
    case ProblemKind::MIS:
    case ProblemKind::MVC: size = draw(4, 14); break;
    case ProblemKind::PFSP:
      size = draw(2, 6);
      opts.machines = draw(2, 4);
      break;
    case ProblemKind::JSSP:
      size = draw(2, 3);
      opts.machines = draw(2, 3);
      break;
  }
  const Distribution dist = (kind == ProblemKind::MIS || kind == ProblemKind::MVC) && index % 2 == 1
                                ? Distribution::BarabasiAlbert
                                : default_distribution(kind);
  auto inst = generate_instance(kind, size, dist, splitmix64(seed + 7919 * static_cast<std::uint64_t>(index)), opts);
  inst.id += "-" + std::to_string(index);
  return inst;
}

}  // namespace

std::string_view criterion_name(int id) {
  if (id < 1 || id > kCriterionCount) throw Error(ErrorCode::DomainError, "criterion id out of range");
  return kNames[id - 1];
}

std::vector<int> suite_criteria(std::string_view suite) {
  if (suite == "feasibility") return {1};
  if (suite == "grammar") return {2};
  if (suite == "locality") return {3, 4, 5};
  if (suite == "lemma1") return {6};
  if (suite == "sampling") return {7, 8, 9};
  if (suite == "bopo-grad") return {10, 11};
  if (suite == "oracle-equiv") return {12};
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  throw Error(ErrorCode::DomainError, "unknown suite '" + std::string(suite) + "'");
}

std::vector<std::string> suite_names() {
  return {"feasibility", "grammar", "locality", "lemma1", "sampling", "bopo-grad", "oracle-equiv", "all"};
}

std::string format_result(const CriterionResult& r) {
  return fmt("%s %2d %-22s %s (%.1fs)", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(), r.seconds);
}

CriterionResult AcceptanceRunner::run(int id) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = fuzz_feasibility(); break;
    case 2: r = format_validity(); break;
    case 3: r = idempotence(); break;
    case 4: r = locality(); break;
    case 5: r = tsp_quality(); break;
    case 6: r = consistency_expectation(); break;
    case 7: r = min_gap_decay(); break;
    case 8: r = rejection_count(); break;
    case 9: r = adaptive_samples(); break;
    case 10: r = preference_gradients(); break;
    case 11: r = training_trend(); break;
    case 12: r = oracle_equivalence(); break;
    default: throw Error(ErrorCode::DomainError, "criterion id out of range");
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

const FuzzSummary& AcceptanceRunner::fuzz(ProblemKind kind) {
  auto it = fuzz_cache_.find(kind);
  if (it == fuzz_cache_.end()) {
    const auto corpus = make_fuzz_corpus(kind, options_.fuzz_cases, options_.seed);
    it = fuzz_cache_.emplace(kind, run_fuzz(corpus, options_.exec, options_.repair)).first;
  }
  return it->second;
}

CriterionResult AcceptanceRunner::fuzz_feasibility() {
  std::size_t total = 0, bad = 0;
  std::string first;
  for (auto kind : kAllKinds) {
    const auto& s = fuzz(kind);
    total += s.cases;
    bad += s.infeasible_after + s.errors + s.magnitude_mismatch;
    if (first.empty() && (s.infeasible_after + s.errors + s.magnitude_mismatch) > 0) first = s.first_failure;
  }
  auto detail = fmt("%zu/%zu repaired inputs feasible", total - bad, total);
  if (!first.empty()) detail += "; first failure: " + first;
  return make(1, bad == 0 && total > 0, detail);
}

CriterionResult AcceptanceRunner::format_validity() {
  const UniformValidPolicy policy;
  std::size_t total = 0, failures = 0;
  std::string first;
  constexpr int kInstances = 50;
  for (auto kind : kAllKinds) {
    std::vector<Instance> instances;
    for (int i = 0; i < kInstances; ++i) instances.push_back(fuzz_instance(kind, static_cast<std::size_t>(i), options_.seed + 11));
    std::vector<std::string> errors(static_cast<std::size_t>(options_.decodes));
    parallel_for(errors.size(), options_.exec, [&](std::size_t i) {
      const auto& inst = instances[i % instances.size()];
      DecodeConfig cfg;
      cfg.temperature = 1.0;
      cfg.seed = options_.seed + i;
      std::string text;
      try {
        text = decode(policy, inst, cfg);
        (void)parse_solution(inst.kind, inst.size(), text);
      } catch (const std::exception& e) {
        errors[i] = inst.id + " '" + text + "': " + e.what();
      }
    });
    for (const auto& e : errors) {
      ++total;
      if (!e.empty()) {
        ++failures;
        if (first.empty()) first = e;
      }
    }
  }
  auto detail = fmt("%zu/%zu constrained decodes parsed", total - failures, total);
  if (!first.empty()) detail += "; first failure: " + first;
  return make(2, failures == 0 && total > 0, detail);
}

CriterionResult AcceptanceRunner::idempotence() {
  std::size_t checked = 0, changed = 0;
  std::string first;
  auto check = [&](const Instance& inst, const Solution& x) {
    ++checked;
    const auto out = repair(inst, x, options_.repair);
    if (out.modified || !(out.repaired == x)) {
      ++changed;
      if (first.empty()) first = inst.id + ": " + solution_key(x);
    }
  };
  auto enumerate = [&](ProblemKind kind, int max_size, int machines) {
    for (int size = 1; size <= max_size; ++size)
      for (int rep = 0; rep < 3; ++rep) {
        GenerateOptions opts;
        opts.machines = machines;
        const auto inst = generate_instance(kind, size, default_distribution(kind),
                                            options_.seed + 100 * static_cast<std::uint64_t>(size) + rep, opts);
        for (const auto& x : enumerate_feasible(inst)) check(inst, x);
      }
  };
  enumerate(ProblemKind::TSP, 6, 0);
  enumerate(ProblemKind::MIS, 8, 0);
  enumerate(ProblemKind::MVC, 8, 0);
  enumerate(ProblemKind::PFSP, 5, 3);
  for (auto kind : {ProblemKind::OP, ProblemKind::CVRP, ProblemKind::JSSP}) {
    for (int i = 0; i < options_.idempotence_samples; ++i) {
      const auto inst = fuzz_instance(kind, static_cast<std::size_t>(i % 50), options_.seed + 23);
      Rng rng = child_rng(options_.seed + 29, static_cast<std::uint64_t>(i));
      check(inst, random_feasible(inst, rng));
    }
  }
  auto detail = fmt("%zu/%zu feasible solutions returned unchanged", checked - changed, checked);
  if (!first.empty()) detail += "; first changed: " + first;
  return make(3, changed == 0 && checked > 0, detail);
}

CriterionResult AcceptanceRunner::locality() {
  std::size_t total = 0, bad = 0;
  std::string first, ratios;
  for (auto kind : kAllKinds) {
    const auto& s = fuzz(kind);
    total += s.cases;
    bad += s.locality_violations + s.errors + s.double_repair_mismatch;
    if (first.empty() && (s.locality_violations + s.errors + s.double_repair_mismatch) > 0) first = s.first_failure;
    ratios += fmt("%s%s %.2f", ratios.empty() ? "" : ", ", std::string(kind_name(kind)).c_str(), s.max_locality_ratio);
  }
  auto detail = fmt("%zu/%zu inputs with d <= alpha*v and stable re-repair; max d/v: %s", total - bad, total, ratios.c_str());
  if (!first.empty()) detail += "; first failure: " + first;
  return make(4, bad == 0 && total > 0, detail);
}

CriterionResult AcceptanceRunner::tsp_quality() {
  const auto& s = fuzz(ProblemKind::TSP);
  auto detail = fmt("%zu/%zu TSP repairs within 2*sqrt(2)*missing", s.cases - s.quality_violations - s.errors, s.cases);
  return make(5, s.quality_violations == 0 && s.errors == 0 && s.cases > 0, detail);
}

CriterionResult AcceptanceRunner::consistency_expectation() {
  const std::vector<std::vector<double>> dists = {{1.0}, {0.5, 0.5}, {0.25, 0.25, 0.25, 0.25}};
  const char* names[] = {"point", "coin", "uniform4"};
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < dists.size(); ++i) {
    const auto c = consistency_expectation_check(dists[i], 2, options_.mc_trials, options_.seed + i, options_.exec);
    const double rel = std::abs(c.empirical - c.analytic) / c.analytic;
    pass = pass && rel <= 0.02;
    detail += fmt("%s%s %.4f vs %.4f (%.2f%%)", detail.empty() ? "" : ", ", names[i], c.empirical, c.analytic, 100 * rel);
  }
  return make(6, pass, detail);
}

CriterionResult AcceptanceRunner::min_gap_decay() {
  const auto dist = GapDistribution::parse("exp:1");
  bool pass = true;
  std::string detail;
  for (int n : {1, 2, 4, 8}) {
    const double mean = simulate_min_gap(n, dist, options_.mc_trials, options_.seed + n, options_.exec);
    const double target = 1.0 / n;
    const double rel = std::abs(mean - target) / target;
    pass = pass && rel <= 0.05;
    detail += fmt("%sN=%d %.4f vs %.4f", detail.empty() ? "" : ", ", n, mean, target);
  }
  return make(7, pass, detail);
}

CriterionResult AcceptanceRunner::rejection_count() {
  const int n = expected_rejection_samples(0.5, 0.01);
  const double success = simulate_rejection_success(0.5, n, options_.mc_trials, options_.seed, options_.exec);
  return make(8, n == 7 && success >= 0.99, fmt("N=%d (expected 7), empirical success %.5f (>= 0.99)", n, success));
}

CriterionResult AcceptanceRunner::adaptive_samples() {
  SamplerConfig cfg;
  cfg.n_min = 8;
  cfg.n_max = 64;
  const double easy = simulate_adaptive_samples(0.8, cfg, options_.adaptive_runs, options_.seed, options_.exec);
  const double hard = simulate_adaptive_samples(0.05, cfg, options_.adaptive_runs, options_.seed + 1, options_.exec);
  const double bound = adaptive_bound(0.8, cfg.n_min, cfg.n_max);
  const bool pass = easy <= 8.001 + 0.5 && hard > 8.0;
  return make(9, pass,
              fmt("q=0.8: E[samples]=%.3f (limit 8.501, formula %.4f); q=0.05: E[samples]=%.3f (> 8)", easy, bound, hard));
}

CriterionResult AcceptanceRunner::preference_gradients() {
  double worst_bopo = 0.0, worst_dpo = 0.0, worst_grpo = 0.0, worst_identity = 0.0;
  for (int c = 0; c < options_.gradient_configs; ++c) {
    Rng rng = child_rng(options_.seed + 31, static_cast<std::uint64_t>(c));
    const int n = 4 + c % 2;
    const auto inst = generate_instance(ProblemKind::TSP, n, Distribution::Uniform, options_.seed * 977 + c);
    const auto support = enumerate_feasible(inst);
    std::vector<double> theta(support.size());
    for (auto& t : theta) t = standard_normal(rng);
    const ToySoftmaxPolicy policy(support, theta);
    const double beta = 0.1 + 2.0 * uniform01(rng);

    std::vector<Solution> samples;
    PreferenceBatch batch;
    while (batch.empty()) {
      samples.clear();
      for (int k = 0; k < 8; ++k) samples.push_back(support[policy.sample(rng)]);
      batch = build_pairs(inst, samples);
    }
    worst_bopo = std::max(worst_bopo, relative_error(bopo_gradient(policy, batch, beta),
                                                     numeric_gradient(policy, [&](const ToySoftmaxPolicy& p) {
                                                       return bopo_loss(p, batch, beta);
                                                     })));

    const auto& w = batch.best;
    const auto& l = batch.pairs.front().inferior;
    worst_dpo = std::max(worst_dpo, relative_error(dpo_gradient(policy, w, l, beta),
                                                   numeric_gradient(policy, [&](const ToySoftmaxPolicy& p) {
                                                     return dpo_loss(p, w, l, beta);
                                                   })));

    std::vector<double> rewards;
    for (const auto& s : samples) rewards.push_back(-objective(inst, s));
    worst_grpo = std::max(worst_grpo, relative_error(grpo_gradient(policy, samples, rewards),
                                                     numeric_gradient(policy, [&](const ToySoftmaxPolicy& p) {
                                                       return grpo_loss(p, samples, rewards);
                                                     })));

    PreferenceBatch single;
    single.best = w;
    single.pairs.push_back({l, batch.pairs.front().gap, 1.0});
    const auto gb = bopo_gradient(policy, single, beta);
    const auto gd = dpo_gradient(policy, w, l, beta);
    double diff = std::abs(bopo_loss(policy, single, beta) - dpo_loss(policy, w, l, beta));
    for (std::size_t i = 0; i < gb.size(); ++i) diff = std::max(diff, std::abs(gb[i] - gd[i]));
    worst_identity = std::max(worst_identity, diff);
  }
  const bool pass = worst_bopo < 1e-5 && worst_dpo < 1e-5 && worst_grpo < 1e-5 && worst_identity <= 1e-12;
  return make(10, pass,
              fmt("%d configs; max relative error bopo %.2e, dpo %.2e, grpo %.2e; unit-weight bopo-dpo diff %.1e",
                  options_.gradient_configs, worst_bopo, worst_dpo, worst_grpo, worst_identity));
}

CriterionResult AcceptanceRunner::training_trend() {
  const auto inst = generate_instance(ProblemKind::TSP, 5, Distribution::Uniform, options_.seed + 41);
  const auto support = enumerate_feasible(inst);
  const int steps = options_.training_steps;
  const int early = std::max(1, steps / 4);
  double early_sum = 0.0, full_sum = 0.0;
  int decreased = 0;
  double mass_before = 0.0, mass_after = 0.0, lr = 0.0;
  for (int s = 0; s < options_.training_seeds; ++s) {
    TrainConfig cfg;
    cfg.steps = steps;
    cfg.seed = options_.seed + static_cast<std::uint64_t>(s);
    const auto trace = train_toy(inst, ToySoftmaxPolicy(support), cfg);
    for (int t = 0; t < steps; ++t) {
      const double g = trace.steps[static_cast<std::size_t>(t)].grad_norm2;
      full_sum += g;
      if (t < early) early_sum += g;
    }
    decreased += trace.final_eval_loss < trace.initial_eval_loss;
    mass_before += trace.initial_optimal_mass;
    mass_after += trace.final_optimal_mass;
    lr = trace.learning_rate;
  }
  const double runs = options_.training_seeds;
  const double early_mean = early_sum / (early * runs);
  const double full_mean = full_sum / (steps * runs);
  const int needed = static_cast<int>(std::ceil(0.95 * options_.training_seeds));
  const bool pass = full_mean <= early_mean && decreased >= needed;
  return make(11, pass,
              fmt("mean |g|^2 over %d steps %.3e <= first %d steps %.3e; loss decreased in %d/%d seeds; "
                  "optimal mass %.3f -> %.3f; lr %.3g",
                  steps, full_mean, early, early_mean, decreased, options_.training_seeds, mass_before / runs,
                  mass_after / runs, lr));
}

CriterionResult AcceptanceRunner::oracle_equivalence() {
  SolveOptions opts;
  opts.policy = "heuristic";
  opts.mode = SolveMode::Fixed;
  opts.n_samples = 8;
  opts.decode.seed = options_.seed;
  opts.exec = options_.exec;
  std::size_t checked = 0, below_oracle = 0, above_bound = 0, failures = 0;
  long raw_infeasible = 0, samples = 0;
  double gap_sum = 0.0, bound_gap_sum = 0.0;
  std::string first;
  for (auto kind : kAllKinds) {
    std::vector<Instance> instances;
    for (int i = 0; i < options_.oracle_instances; ++i) instances.push_back(oracle_sized_instance(kind, i, options_.seed));
    // The heuristic policy mostly emits feasible text; the uniform policy exercises the repair term.
    auto records = run_pipeline(instances, opts).records;
    SolveOptions uniform = opts;
    uniform.policy = "uniform";
    const auto more = run_pipeline(instances, uniform).records;
    records.insert(records.end(), more.begin(), more.end());
    const bool maximize = sense_of(kind) == Sense::Maximize;
    for (const auto& r : records) {
      raw_infeasible += r.samples_used - r.raw_feasible;
      samples += r.samples_used;
      ++checked;
      if (r.error || !r.feasible || !r.oracle) {
        ++failures;
        if (first.empty()) first = r.id + ": " + (r.error ? *r.error : std::string("infeasible or no oracle"));
        continue;
      }
      const double best = maximize ? -r.objective : r.objective;
      const double opt = maximize ? -*r.oracle : *r.oracle;
      const double tol = 1e-9 * std::max(1.0, std::abs(opt));
      if (best < opt - tol) {
        ++below_oracle;
        if (first.empty()) first = r.id + ": better than the oracle optimum";
      }
      if (best > r.bound + tol) {
        ++above_bound;
        if (first.empty()) first = r.id + ": best objective above the repair bound";
      }
      gap_sum += best - opt;
      bound_gap_sum += r.bound - opt;
    }
  }

  SolveOptions tsp = opts;
  std::vector<Instance> tsp8;
  for (int i = 0; i < options_.oracle_instances; ++i) {
    auto inst = generate_instance(ProblemKind::TSP, 8, Distribution::Uniform, options_.seed + 5000 + i);
    inst.id += "-" + std::to_string(i);
    tsp8.push_back(std::move(inst));
  }
  const auto tsp_report = run_pipeline(tsp8, tsp);
  const double tsp_gap = tsp_report.aggregates.mean_gap.value_or(std::numeric_limits<double>::infinity());

  const bool pass = failures == 0 && below_oracle == 0 && above_bound == 0 && checked > 0 && tsp_gap <= 0.10;
  auto detail = fmt("%zu runs (heuristic and uniform policies, %ld/%ld raw samples infeasible): %zu below optimum, "
                    "%zu above bound, %zu errors; mean excess %.4f <= mean bound excess %.4f; TSP n=8 N=8 heuristic "
                    "mean gap %.2f%% (<= 10%%)",
                    checked, raw_infeasible, samples, below_oracle, above_bound, failures, gap_sum / std::max<std::size_t>(checked, 1),
                    bound_gap_sum / std::max<std::size_t>(checked, 1), 100 * tsp_gap);
  if (!first.empty()) detail += "; first failure: " + first;
  return make(12, pass, detail);
}

}  // namespace cogent
