#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cogent/decoder.hpp"

namespace cogent {

/// All-zero scores: uniform over whatever the grammar leaves unmasked.
class UniformValidPolicy final : public PolicySource {
 public:
  std::vector<double> next_logits(std::string_view prompt, std::span<const TokenId> prefix) const override;
};

/// Replays a fixed token sequence: the script token at the current position gets a high
/// score and every other token a deterministic pseudo-random score. Past the end of the
/// script it prefers EOS.
class ScriptedPolicy final : public PolicySource {
 public:
  explicit ScriptedPolicy(std::string_view script, std::uint64_t noise_seed = 0);
  explicit ScriptedPolicy(std::vector<TokenId> script, std::uint64_t noise_seed = 0);

  std::vector<double> next_logits(std::string_view prompt, std::span<const TokenId> prefix) const override;
  const std::vector<TokenId>& script() const { return script_; }

 private:
  std::vector<TokenId> script_;
  std::uint64_t noise_seed_;
};

/// Problem-aware scores built from the partial output: distance-greedy for routing,
/// degree-based for graphs, simple dispatch rules for scheduling. Ignores the prompt and
/// reads the instance it was built with.
class HeuristicPolicy final : public PolicySource {
 public:
  explicit HeuristicPolicy(Instance instance, double beta = 12.0);

  std::vector<double> next_logits(std::string_view prompt, std::span<const TokenId> prefix) const override;

 private:
  Instance instance_;
  double beta_;
  std::vector<int> degree_;
  std::vector<std::vector<int>> adjacency_;
  double pfsp_scale_ = 1.0;
};

/// "uniform", "heuristic" or "scripted:<path>".
std::unique_ptr<PolicySource> make_policy(const std::string& spec, const Instance& instance);

}  // namespace cogent
