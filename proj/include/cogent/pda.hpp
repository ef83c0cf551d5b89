#pragma once

#include <vector>

#include "cogent/grammar.hpp"
#include "cogent/vocabulary.hpp"

namespace cogent {

/// Stack bottom marker.
inline constexpr Symbol kBottom{true, -1};

struct PdaConfiguration {
  std::vector<Symbol> stack;  // stack.front() is kBottom, top is back()
  int consumed = 0;

  bool accepting() const { return stack.size() == 1; }
  bool operator==(const PdaConfiguration&) const = default;
};

/// Single-state pushdown automaton over a left-factored LL(1) form of a grammar.
/// Immutable after construction; all queries are const and thread-safe.
class Pda {
 public:
  /// Left-factors g and builds the LL(1) table. Throws GrammarInvalid, LeftRecursion or
  /// NotLL1.
  explicit Pda(const Grammar& g);

  PdaConfiguration initial() const;

  /// Tokens that can be consumed next. EOS is included when the remaining stack can be
  /// expanded to nothing. Empty iff cfg is accepting.
  TokenSet valid_tokens(const PdaConfiguration& cfg) const;

  /// Throws InvalidToken unless token is in valid_tokens(cfg). EOS empties the stack.
  PdaConfiguration advance(const PdaConfiguration& cfg, TokenId token) const;
  void advance_in_place(PdaConfiguration& cfg, TokenId token) const;

  /// Minimal number of grammar terminals needed to reach acceptance (EOS is free).
  int min_completion_tokens(const PdaConfiguration& cfg) const;

  /// Valid tokens that lie on some shortest path to acceptance.
  TokenSet shortest_path_tokens(const PdaConfiguration& cfg) const;

  /// Valid tokens after which acceptance is still reachable within max_tokens consumed
  /// tokens; falls back to shortest_path_tokens if none qualify.
  TokenSet guarded_tokens(const PdaConfiguration& cfg, int max_tokens) const;

  /// Full-sentence membership; the EOS token is implied at the end.
  bool accepts(const std::vector<TokenId>& tokens) const;

  /// The left-factored grammar the automaton runs on.
  const Grammar& factored() const { return grammar_; }
  bool nullable(int nonterminal) const { return nullable_[nonterminal]; }
  TokenSet first(int nonterminal) const { return first_[nonterminal]; }
  TokenSet follow(int nonterminal) const { return follow_[nonterminal]; }

 private:
  bool try_advance(PdaConfiguration& cfg, TokenId token) const;
  int symbol_yield(const Symbol& s) const { return s.terminal ? 1 : min_yield_[s.id]; }

  Grammar grammar_;
  std::vector<bool> nullable_;
  std::vector<TokenSet> first_;
  std::vector<TokenSet> follow_;  // includes EOS as the end marker
  std::vector<int> min_yield_;
  std::vector<std::vector<int>> table_;  // [nonterminal][token] -> production index or -1
};

Pda grammar_to_pda(const Grammar& g);

/// Runaway guard length: 16 * (size + 4) * (1 + machines).
int max_decode_tokens(int size, int machines);

/// Shared automaton for (kind, size); built once per process and safe to share.
const Pda& cached_pda(ProblemKind kind, int size);

}  // namespace cogent
