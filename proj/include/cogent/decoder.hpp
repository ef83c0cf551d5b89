#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogent/problem.hpp"
#include "cogent/random.hpp"
#include "cogent/vocabulary.hpp"

namespace cogent {

/// Next-token score provider standing in for a language model.
/// Implementations must be callable concurrently from several decodes (const, no
/// shared mutable state).
class PolicySource {
 public:
  virtual ~PolicySource() = default;
  /// One finite score per vocabulary token.
  virtual std::vector<double> next_logits(std::string_view prompt, std::span<const TokenId> prefix) const = 0;
};

struct DecodeConfig {
  double temperature = 0.7;
  std::uint64_t seed = 0;
  bool greedy = false;
  /// Runaway guard; 0 selects max_decode_tokens for the instance.
  int max_tokens = 0;
};

struct DecodeResult {
  std::string text;
  std::vector<TokenId> tokens;  // without EOS
  int policy_queries = 0;
  int forced_moves = 0;
};

/// Canonical instance serialization used as the prompt.
std::string render_prompt(const Instance& instance);

DecodeResult decode_tokens(const PolicySource& policy, const Instance& instance, const DecodeConfig& config);
std::string decode(const PolicySource& policy, const Instance& instance, const DecodeConfig& config);

/// decode followed by parse.
Solution sample_solution(const PolicySource& policy, const Instance& instance, const DecodeConfig& config);

/// Samples one token from the masked, temperature-scaled softmax. Throws PolicyFailure on
/// non-finite scores of allowed tokens.
TokenId sample_masked(const std::vector<double>& logits, TokenSet allowed, double temperature, bool greedy, Rng& rng);

}  // namespace cogent
