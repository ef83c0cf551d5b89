#include "cogent/decoder.hpp"

#include <cmath>
#include <limits>

#include "cogent/error.hpp"
#include "cogent/instance_io.hpp"
#include "cogent/pda.hpp"
#include "cogent/solution_text.hpp"

namespace cogent {

std::string render_prompt(const Instance& instance) { return serialize_instance(instance); }

TokenId sample_masked(const std::vector<double>& logits, TokenSet allowed, double temperature, bool greedy, Rng& rng) {
  if (allowed.empty()) throw Error(ErrorCode::InvalidToken, "no token is allowed");
  if (!(temperature > 0.0)) throw Error(ErrorCode::DomainError, "temperature must be positive");
  if (logits.size() != static_cast<std::size_t>(tok::kCount)) {
    throw Error(ErrorCode::PolicyFailure, "policy returned " + std::to_string(logits.size()) + " scores");
  }
  const auto ids = allowed.to_vector();
  double top = -std::numeric_limits<double>::infinity();
  TokenId best = ids.front();
  for (TokenId t : ids) {
    if (!std::isfinite(logits[t])) throw Error(ErrorCode::PolicyFailure, "non-finite score for token #" + std::to_string(t));
    if (logits[t] > top) {
      top = logits[t];
      best = t;
    }
  }
  if (greedy) return best;
  double weights[tok::kCount];
  double total = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    weights[k] = std::exp((logits[ids[k]] - top) / temperature);
    total += weights[k];
  }
  double u = uniform01(rng) * total;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    u -= weights[k];
    if (u < 0.0) return ids[k];
  }
  return ids.back();
}

DecodeResult decode_tokens(const PolicySource& policy, const Instance& instance, const DecodeConfig& config) {
  const Pda& pda = cached_pda(instance.kind, instance.size());
  const int limit = config.max_tokens > 0 ? config.max_tokens : max_decode_tokens(instance.size(), instance.machines());
  const std::string prompt = render_prompt(instance);
  Rng rng = child_rng(config.seed, 0);

  DecodeResult out;
  PdaConfiguration cfg = pda.initial();
  while (!cfg.accepting()) {
    const TokenSet allowed = pda.guarded_tokens(cfg, limit);
    TokenId next;
    if (allowed.size() == 1) {
      next = allowed.first();
      ++out.forced_moves;
    } else {
      const auto logits = policy.next_logits(prompt, out.tokens);
      ++out.policy_queries;
      next = sample_masked(logits, allowed, config.temperature, config.greedy, rng);
    }
    pda.advance_in_place(cfg, next);
    if (next != tok::kEos) out.tokens.push_back(next);
  }
  out.text = Vocabulary::standard().detokenize(out.tokens);
  return out;
}

std::string decode(const PolicySource& policy, const Instance& instance, const DecodeConfig& config) {
  return decode_tokens(policy, instance, config).text;
}

Solution sample_solution(const PolicySource& policy, const Instance& instance, const DecodeConfig& config) {
  return parse_solution(instance.kind, instance.size(), decode(policy, instance, config));
}

}  // namespace cogent
