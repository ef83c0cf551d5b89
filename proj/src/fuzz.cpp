#include "cogent/fuzz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cogent/error.hpp"
#include "cogent/generate.hpp"
#include "cogent/oracle.hpp"

namespace cogent {

namespace {

int draw(Rng& rng, int lo, int hi) { return static_cast<int>(uniform_int(rng, lo, hi)); }

std::vector<int> permutation(int lo, int hi, Rng& rng) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  shuffle(v, rng);
  return v;
}

std::vector<int> random_sequence(int lo, int hi, int max_len, Rng& rng) {
  std::vector<int> v(static_cast<std::size_t>(draw(rng, 0, max_len)));
  for (auto& x : v) x = draw(rng, lo, hi);
  return v;
}

/// Indices drawn from a range twice as wide, with the out-of-range ones dropped.
std::vector<int> cleaned_sequence(int lo, int hi, int max_len, Rng& rng) {
  std::vector<int> v;
  const int len = draw(rng, 0, max_len);
  for (int i = 0; i < len; ++i) {
    const int x = draw(rng, lo, lo + 2 * (hi - lo + 1) - 1);
    if (x <= hi) v.push_back(x);
  }
  return v;
}

void truncate(std::vector<int>& v, Rng& rng) {
  if (!v.empty()) v.resize(static_cast<std::size_t>(draw(rng, 0, static_cast<int>(v.size()) - 1)));
}

void duplicate(std::vector<int>& v, Rng& rng) {
  if (v.size() < 2) {
    if (!v.empty()) v.push_back(v.front());
    return;
  }
  const int last = static_cast<int>(v.size()) - 1;
  const int k = draw(rng, 1, std::max(1, static_cast<int>(v.size()) / 3));
  for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(draw(rng, 0, last))] = v[static_cast<std::size_t>(draw(rng, 0, last))];
}

std::vector<std::vector<int>> split_random(const std::vector<int>& seq, Rng& rng) {
  std::vector<std::vector<int>> routes;
  for (int v : seq) {
    if (routes.empty() || bernoulli(rng, 0.3)) routes.emplace_back();
    routes.back().push_back(v);
  }
  return routes;
}

Solution sequence_solution(ProblemKind kind, std::vector<int> seq) {
  switch (kind) {
    case ProblemKind::TSP: return Tour{std::move(seq)};
    case ProblemKind::OP: return PrizeRoute{std::move(seq)};
    case ProblemKind::PFSP: return JobOrder{std::move(seq)};
    case ProblemKind::MIS:
    case ProblemKind::MVC: return VertexSet{std::move(seq)};
    default: throw Error(ErrorCode::KindMismatch, "not a flat payload kind");
  }
}

Solution flat_case(const Instance& inst, FuzzFamily family, Rng& rng) {
  const int n = inst.size();
  const ProblemKind kind = inst.kind;
  const bool is_set = kind == ProblemKind::MIS || kind == ProblemKind::MVC;
  // Index ranges as the grammar allows them.
  const int lo = kind == ProblemKind::PFSP ? 1 : 0;
  const int hi = kind == ProblemKind::PFSP ? n : n - 1;
  // Full item list: customers for OP, all indices otherwise.
  const int item_lo = kind == ProblemKind::OP ? 1 : lo;
  std::vector<int> seq;
  switch (family) {
    case FuzzFamily::Random:
      if (is_set) {
        for (int v = lo; v <= hi; ++v)
          if (bernoulli(rng, 0.5)) seq.push_back(v);
      } else {
        seq = random_sequence(lo, hi, 2 * n, rng);
      }
      break;
    case FuzzFamily::Truncated: {
      seq = is_set ? std::get<VertexSet>(random_feasible(inst, rng)).vertices : permutation(item_lo, hi, rng);
      truncate(seq, rng);
      break;
    }
    case FuzzFamily::Duplicated:
      seq = permutation(item_lo, hi, rng);
      if (is_set) seq.resize(static_cast<std::size_t>(draw(rng, 1, static_cast<int>(seq.size()))));
      duplicate(seq, rng);
      break;
    case FuzzFamily::OutOfRangeCleaned: seq = cleaned_sequence(lo, hi, 2 * n, rng); break;
    case FuzzFamily::Overloaded:
      seq = permutation(item_lo, hi, rng);
      if (kind == ProblemKind::TSP || kind == ProblemKind::PFSP) {
        const auto again = permutation(item_lo, hi, rng);
        seq.insert(seq.end(), again.begin(), again.end());
      }
      break;
    case FuzzFamily::Empty: break;
    case FuzzFamily::Feasible: return random_feasible(inst, rng);
  }
  return sequence_solution(kind, std::move(seq));
}

Solution cvrp_case(const Instance& inst, FuzzFamily family, Rng& rng) {
  const int n = inst.size();
  RouteSet rs;
  switch (family) {
    case FuzzFamily::Random: {
      const int k = draw(rng, 1, std::max(1, n - 1));
      for (int r = 0; r < k; ++r) {
        auto route = random_sequence(0, n - 1, n, rng);
        if (route.empty()) route.push_back(draw(rng, 0, n - 1));
        rs.routes.push_back(std::move(route));
      }
      break;
    }
    case FuzzFamily::Truncated: {
      auto seq = permutation(1, n - 1, rng);
      truncate(seq, rng);
      rs.routes = split_random(seq, rng);
      break;
    }
    case FuzzFamily::Duplicated: {
      auto seq = permutation(1, n - 1, rng);
      duplicate(seq, rng);
      rs.routes = split_random(seq, rng);
      break;
    }
    case FuzzFamily::OutOfRangeCleaned: rs.routes = split_random(cleaned_sequence(0, n - 1, 2 * n, rng), rng); break;
    case FuzzFamily::Overloaded: rs.routes.push_back(permutation(1, n - 1, rng)); break;
    case FuzzFamily::Empty: break;
    case FuzzFamily::Feasible: return random_feasible(inst, rng);
  }
  return rs;
}

Solution jssp_case(const Instance& inst, FuzzFamily family, Rng& rng) {
  const int n = inst.size();
  const int m = inst.machines();
  MachineSchedules ms;
  switch (family) {
    case FuzzFamily::Random: {
      if (bernoulli(rng, 0.5)) {
        // Exact permutations in random order: usually a cyclic disjunctive graph.
        for (int k = 0; k < m; ++k) ms.machines.push_back(permutation(1, n, rng));
      } else {
        const int count = draw(rng, std::max(0, m - 1), m + 1);
        for (int k = 0; k < count; ++k) ms.machines.push_back(random_sequence(1, n, 2 * n, rng));
      }
      break;
    }
    case FuzzFamily::Truncated:
      ms = std::get<MachineSchedules>(random_feasible(inst, rng));
      for (auto& seq : ms.machines)
        if (bernoulli(rng, 0.5)) truncate(seq, rng);
      if (bernoulli(rng, 0.3) && !ms.machines.empty()) ms.machines.pop_back();
      break;
    case FuzzFamily::Duplicated:
      ms = std::get<MachineSchedules>(random_feasible(inst, rng));
      for (auto& seq : ms.machines)
        if (bernoulli(rng, 0.5)) duplicate(seq, rng);
      break;
    case FuzzFamily::OutOfRangeCleaned:
      for (int k = 0; k < m; ++k) ms.machines.push_back(cleaned_sequence(1, n, 2 * n, rng));
      break;
    case FuzzFamily::Overloaded:
      for (int k = 0; k < m; ++k) {
        auto seq = permutation(1, n, rng);
        const auto again = permutation(1, n, rng);
        seq.insert(seq.end(), again.begin(), again.end());
        ms.machines.push_back(std::move(seq));
      }
      break;
    case FuzzFamily::Empty: break;
    case FuzzFamily::Feasible: return random_feasible(inst, rng);
  }
  return ms;
}

double missing_count(const Instance& inst, const Tour& tour) {
  std::set<int> present(tour.nodes.begin(), tour.nodes.end());
  return static_cast<double>(inst.size()) - static_cast<double>(present.size());
}

struct CaseResult {
  bool infeasible_after = false;
  bool magnitude_mismatch = false;
  bool not_idempotent = false;
  bool locality = false;
  bool quality = false;
  bool double_repair = false;
  bool error = false;
  double ratio = 0.0;
  std::string message;
};

}  // namespace

Instance fuzz_instance(ProblemKind kind, std::size_t index, std::uint64_t seed) {
  Rng rng = child_rng(seed, 1'000'000 + index);
  const bool alt = index % 2 == 1;
  GenerateOptions opts;
  int size = 0;
  Distribution dist = default_distribution(kind);
  switch (kind) {
    case ProblemKind::TSP:
    case ProblemKind::OP:
      size = draw(rng, 2, 15);
      dist = alt ? Distribution::GaussianMixture : Distribution::Uniform;
      break;
    case ProblemKind::CVRP:
      size = draw(rng, 2, 12);
      dist = alt ? Distribution::GaussianMixture : Distribution::Uniform;
      break;
    case ProblemKind::MIS:
    case ProblemKind::MVC:
      size = draw(rng, 2, 20);
      dist = alt ? Distribution::BarabasiAlbert : Distribution::ErdosRenyi;
      break;
    case ProblemKind::PFSP:
      size = draw(rng, 1, 10);
      opts.machines = draw(rng, 1, 5);
      break;
    case ProblemKind::JSSP:
      size = draw(rng, 1, 6);
      opts.machines = draw(rng, 1, 4);
      break;
  }
  return generate_instance(kind, size, dist, splitmix64(seed ^ (index + 17)), opts);
}

std::string_view family_name(FuzzFamily family) {
  switch (family) {
    case FuzzFamily::Random: return "random";
    case FuzzFamily::Truncated: return "truncated";
    case FuzzFamily::Duplicated: return "duplicated";
    case FuzzFamily::OutOfRangeCleaned: return "out-of-range";
    case FuzzFamily::Overloaded: return "overloaded";
    case FuzzFamily::Empty: return "empty";
    case FuzzFamily::Feasible: return "feasible";
  }
  return "unknown";
}

Solution fuzz_solution(const Instance& instance, FuzzFamily family, Rng& rng) {
  switch (instance.kind) {
    case ProblemKind::CVRP: return cvrp_case(instance, family, rng);
    case ProblemKind::JSSP: return jssp_case(instance, family, rng);
    default: return flat_case(instance, family, rng);
  }
}

FuzzCorpus make_fuzz_corpus(ProblemKind kind, int cases, std::uint64_t seed, int instance_count) {
  if (cases < 0 || instance_count < 1) throw Error(ErrorCode::DomainError, "bad fuzz corpus size");
  FuzzCorpus corpus;
  corpus.kind = kind;
  for (int i = 0; i < instance_count; ++i) corpus.instances.push_back(fuzz_instance(kind, static_cast<std::size_t>(i), seed));
  corpus.cases.resize(static_cast<std::size_t>(cases));
  for (int c = 0; c < cases; ++c) {
    Rng rng = child_rng(seed, static_cast<std::uint64_t>(c));
    auto& fc = corpus.cases[static_cast<std::size_t>(c)];
    fc.instance = static_cast<std::size_t>(c % instance_count);
    fc.family = static_cast<FuzzFamily>((c / instance_count) % kFuzzFamilyCount);
    fc.input = fuzz_solution(corpus.instances[fc.instance], fc.family, rng);
  }
  return corpus;
}

FuzzSummary run_fuzz(const FuzzCorpus& corpus, Exec exec, const RepairOptions& options) {
  std::vector<CaseResult> results(corpus.cases.size());
  parallel_for(corpus.cases.size(), exec, [&](std::size_t i) {
    const auto& fc = corpus.cases[i];
    const auto& inst = corpus.instances[fc.instance];
    auto& r = results[i];
    auto note = [&](const std::string& what) {
      if (r.message.empty()) {
        r.message = "case " + std::to_string(i) + " (" + std::string(family_name(fc.family)) + ", " + inst.id + "): " + what;
      }
    };
    try {
      const auto in_report = check_feasibility(inst, fc.input);
      const auto out = repair(inst, fc.input, options);
      const auto out_report = check_feasibility(inst, out.repaired);
      if (!out_report.feasible) {
        r.infeasible_after = true;
        note("repaired output infeasible: " + out_report.violations.front().constraint);
      }
      if ((in_report.magnitude == 0.0) != in_report.feasible || (out_report.magnitude == 0.0) != out_report.feasible) {
        r.magnitude_mismatch = true;
        note("violation magnitude disagrees with feasibility");
      }
      if (in_report.feasible && out.modified) {
        r.not_idempotent = true;
        note("feasible input was modified");
      }
      if (out.distance_moved > out.alpha_bound * out.input_magnitude + 1e-9) {
        r.locality = true;
        note("distance " + std::to_string(out.distance_moved) + " > alpha*v " +
             std::to_string(out.alpha_bound * out.input_magnitude));
      }
      if (out.input_magnitude > 0.0) r.ratio = out.distance_moved / out.input_magnitude;
      if (inst.kind == ProblemKind::TSP) {
        const auto& d = inst.as<TspData>();
        const auto& x = std::get<Tour>(fc.input);
        const double before = closed_tour_length(d.coords, x.nodes);
        const double after = closed_tour_length(d.coords, std::get<Tour>(out.repaired).nodes);
        if (after - before > 2.0 * std::sqrt(2.0) * missing_count(inst, x) + 1e-9) {
          r.quality = true;
          note("tour length grew beyond 2*sqrt(2)*missing");
        }
      }
      if (!(repair(inst, out.repaired, options).repaired == out.repaired)) {
        r.double_repair = true;
        note("repair is not stable on its own output");
      }
    } catch (const std::exception& e) {
      r.error = true;
      note(std::string("exception: ") + e.what());
    }
  });
  FuzzSummary s;
  s.cases = results.size();
  for (const auto& r : results) {
    s.infeasible_after += r.infeasible_after;
    s.magnitude_mismatch += r.magnitude_mismatch;
    s.not_idempotent += r.not_idempotent;
    s.locality_violations += r.locality;
    s.quality_violations += r.quality;
    s.double_repair_mismatch += r.double_repair;
    s.errors += r.error;
    s.max_locality_ratio = std::max(s.max_locality_ratio, r.ratio);
    if (s.first_failure.empty() && !r.message.empty()) s.first_failure = r.message;
  }
  return s;
}

}  // namespace cogent
