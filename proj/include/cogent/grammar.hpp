#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cogent/problem.hpp"
#include "cogent/vocabulary.hpp"

namespace cogent {

/// Grammar symbol: a vocabulary token or a nonterminal index.
struct Symbol {
  bool terminal = true;
  int id = 0;

  static constexpr Symbol t(TokenId token) { return {true, token}; }
  static constexpr Symbol nt(int index) { return {false, index}; }
  bool operator==(const Symbol&) const = default;
};

struct Production {
  int lhs = 0;
  std::vector<Symbol> rhs;  // empty rhs is an epsilon production
  bool operator==(const Production&) const = default;
};

class Grammar {
 public:
  /// Declares a nonterminal and returns its index. Names must be unique.
  int add_nonterminal(std::string name);
  void add_production(int lhs, std::vector<Symbol> rhs);
  void set_start(int nonterminal) { start_ = nonterminal; }

  int start() const { return start_; }
  const std::vector<std::string>& nonterminals() const { return names_; }
  const std::vector<Production>& productions() const { return productions_; }
  std::optional<int> find_nonterminal(const std::string& name) const;

  /// Throws GrammarInvalid if a symbol is undeclared, the start is unset, a terminal is
  /// not a grammar literal of the vocabulary, or a nonterminal has no production.
  void validate() const;

  /// BNF listing, one line per nonterminal with alternatives joined by " | ".
  std::string to_bnf() const;

 private:
  std::vector<std::string> names_;
  std::vector<Production> productions_;
  int start_ = -1;
};

/// Output grammar of `kind` specialized to `size` indices: nodes 0..size-1 for routing and
/// graph kinds, jobs 1..size for scheduling kinds.
Grammar build_grammar(ProblemKind kind, int size);

/// Header literal that opens a solution text of this kind.
TokenId header_token(ProblemKind kind);

}  // namespace cogent
