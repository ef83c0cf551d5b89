#include "cogent/pda.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <memory>
#include <mutex>

#include "cogent/error.hpp"

namespace cogent {

namespace {

constexpr int kInf = INT_MAX / 4;

/// Repeatedly splits alternatives of a nonterminal that share a first symbol into
/// A -> prefix A' with A' -> suffixes.
Grammar left_factor(const Grammar& in) {
  std::vector<std::string> names = in.nonterminals();
  std::vector<std::vector<std::vector<Symbol>>> alts(names.size());
  for (const auto& p : in.productions()) alts[p.lhs].push_back(p.rhs);

  for (std::size_t a = 0; a < alts.size(); ++a) {
    int fresh = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      auto& list = alts[a];
      for (std::size_t i = 0; i < list.size() && !changed; ++i) {
        if (list[i].empty()) continue;
        std::vector<std::size_t> group{i};
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          if (!list[j].empty() && list[j].front() == list[i].front()) group.push_back(j);
        }
        if (group.size() < 2) continue;
        std::size_t prefix = 1;
        while (true) {
          const auto& base = list[group[0]];
          if (prefix >= base.size()) break;
          bool all = true;
          for (auto g : group) {
            if (prefix >= list[g].size() || !(list[g][prefix] == base[prefix])) {
              all = false;
              break;
            }
          }
          if (!all) break;
          ++prefix;
        }
        const int tail = static_cast<int>(names.size());
        names.push_back(names[a] + "'" + (fresh ? std::to_string(fresh) : ""));
        ++fresh;
        std::vector<std::vector<Symbol>> suffixes;
        for (auto g : group) suffixes.emplace_back(list[g].begin() + static_cast<long>(prefix), list[g].end());
        std::vector<Symbol> head(list[i].begin(), list[i].begin() + static_cast<long>(prefix));
        head.push_back(Symbol::nt(tail));
        std::vector<std::vector<Symbol>> kept;
        for (std::size_t j = 0; j < list.size(); ++j) {
          if (j == i) kept.push_back(head);
          else if (std::find(group.begin(), group.end(), j) == group.end()) kept.push_back(list[j]);
        }
        list = std::move(kept);
        alts.push_back(std::move(suffixes));
        changed = true;
      }
    }
  }

  Grammar out;
  for (auto& n : names) out.add_nonterminal(n);
  for (std::size_t a = 0; a < alts.size(); ++a) {
    for (auto& rhs : alts[a]) out.add_production(static_cast<int>(a), rhs);
  }
  out.set_start(in.start());
  return out;
}

std::vector<bool> compute_nullable(const Grammar& g) {
  std::vector<bool> nullable(g.nonterminals().size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (nullable[p.lhs]) continue;
      const bool all = std::all_of(p.rhs.begin(), p.rhs.end(),
                                   [&](const Symbol& s) { return !s.terminal && nullable[s.id]; });
      if (all) {
        nullable[p.lhs] = true;
        changed = true;
      }
    }
  }
  return nullable;
}

void reject_left_recursion(const Grammar& g, const std::vector<bool>& nullable) {
  const std::size_t n = g.nonterminals().size();
  std::vector<std::vector<int>> leads(n);
  for (const auto& p : g.productions()) {
    for (const auto& s : p.rhs) {
      if (s.terminal) break;
      leads[p.lhs].push_back(s.id);
      if (!nullable[s.id]) break;
    }
  }
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> state(n, 0);
  auto dfs = [&](auto&& self, int a) -> void {
    state[a] = 1;
    for (int b : leads[a]) {
      if (state[b] == 1) {
        throw Error(ErrorCode::LeftRecursion, "nonterminal " + g.nonterminals()[b] + " is left-recursive");
      }
      if (state[b] == 0) self(self, b);
    }
    state[a] = 2;
  };
  for (std::size_t a = 0; a < n; ++a) {
    if (state[a] == 0) dfs(dfs, static_cast<int>(a));
  }
}

}  // namespace

Pda::Pda(const Grammar& input) {
  input.validate();
  reject_left_recursion(input, compute_nullable(input));
  grammar_ = left_factor(input);
  const auto& prods = grammar_.productions();
  const std::size_t n = grammar_.nonterminals().size();

  nullable_ = compute_nullable(grammar_);

  first_.assign(n, TokenSet{});
  auto seq_first = [&](const std::vector<Symbol>& rhs, std::size_t from, bool& all_nullable) {
    TokenSet out;
    all_nullable = true;
    for (std::size_t i = from; i < rhs.size(); ++i) {
      const auto& s = rhs[i];
      if (s.terminal) {
        out.insert(s.id);
        all_nullable = false;
        break;
      }
      out |= first_[s.id];
      if (!nullable_[s.id]) {
        all_nullable = false;
        break;
      }
    }
    return out;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : prods) {
      bool nl = false;
      const TokenSet before = first_[p.lhs];
      first_[p.lhs] |= seq_first(p.rhs, 0, nl);
      changed |= !(before == first_[p.lhs]);
    }
  }

  follow_.assign(n, TokenSet{});
  follow_[grammar_.start()].insert(tok::kEos);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : prods) {
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        if (p.rhs[i].terminal) continue;
        const int b = p.rhs[i].id;
        bool rest_nullable = false;
        TokenSet add = seq_first(p.rhs, i + 1, rest_nullable);
        if (rest_nullable) add |= follow_[p.lhs];
        const TokenSet before = follow_[b];
        follow_[b] |= add;
        changed |= !(before == follow_[b]);
      }
    }
  }

  min_yield_.assign(n, kInf);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : prods) {
      long total = 0;
      for (const auto& s : p.rhs) total += s.terminal ? 1 : min_yield_[s.id];
      if (total < min_yield_[p.lhs]) {
        min_yield_[p.lhs] = static_cast<int>(total);
        changed = true;
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (min_yield_[a] >= kInf) {
      throw Error(ErrorCode::GrammarInvalid, "nonterminal " + grammar_.nonterminals()[a] + " derives no sentence");
    }
  }

  table_.assign(n, std::vector<int>(tok::kCount, -1));
  for (std::size_t pi = 0; pi < prods.size(); ++pi) {
    const auto& p = prods[pi];
    bool nl = false;
    TokenSet select = seq_first(p.rhs, 0, nl);
    if (nl) select |= follow_[p.lhs];
    for (TokenId t : select.to_vector()) {
      int& cell = table_[p.lhs][t];
      if (cell >= 0 && cell != static_cast<int>(pi)) {
        throw Error(ErrorCode::NotLL1, "conflict for " + grammar_.nonterminals()[p.lhs] + " on token '" +
                                           std::string(Vocabulary::standard().literal(t)) + "'");
      }
      cell = static_cast<int>(pi);
    }
  }
}

PdaConfiguration Pda::initial() const { return {{kBottom, Symbol::nt(grammar_.start())}, 0}; }

TokenSet Pda::valid_tokens(const PdaConfiguration& cfg) const {
  TokenSet out;
  if (cfg.stack.size() <= 1) return out;
  for (auto it = cfg.stack.rbegin(); it != cfg.stack.rend(); ++it) {
    if (*it == kBottom) {
      out.insert(tok::kEos);
      break;
    }
    if (it->terminal) {
      out.insert(it->id);
      break;
    }
    out |= first_[it->id];
    if (!nullable_[it->id]) break;
  }
  return out;
}

bool Pda::try_advance(PdaConfiguration& cfg, TokenId token) const {
  auto& st = cfg.stack;
  while (st.size() > 1) {
    const Symbol top = st.back();
    if (top.terminal) {
      if (top.id != token) return false;
      st.pop_back();
      ++cfg.consumed;
      return true;
    }
    const int pi = table_[top.id][token];
    if (pi < 0) return false;
    st.pop_back();
    const auto& rhs = grammar_.productions()[pi].rhs;
    for (auto it = rhs.rbegin(); it != rhs.rend(); ++it) st.push_back(*it);
  }
  return token == tok::kEos;
}

void Pda::advance_in_place(PdaConfiguration& cfg, TokenId token) const {
  if (token < 0 || token >= tok::kCount || !valid_tokens(cfg).contains(token)) {
    throw Error(ErrorCode::InvalidToken, "token #" + std::to_string(token) + " is masked in this configuration");
  }
  if (!try_advance(cfg, token)) {
    throw Error(ErrorCode::InvalidToken, "token #" + std::to_string(token) + " has no transition");
  }
}

PdaConfiguration Pda::advance(const PdaConfiguration& cfg, TokenId token) const {
  PdaConfiguration next = cfg;
  advance_in_place(next, token);
  return next;
}

int Pda::min_completion_tokens(const PdaConfiguration& cfg) const {
  int total = 0;
  for (std::size_t i = 1; i < cfg.stack.size(); ++i) total += symbol_yield(cfg.stack[i]);
  return total;
}

TokenSet Pda::shortest_path_tokens(const PdaConfiguration& cfg) const {
  const int here = min_completion_tokens(cfg);
  TokenSet out;
  for (TokenId t : valid_tokens(cfg).to_vector()) {
    PdaConfiguration next = cfg;
    try_advance(next, t);
    if ((t == tok::kEos ? 0 : 1) + min_completion_tokens(next) == here) out.insert(t);
  }
  return out;
}

TokenSet Pda::guarded_tokens(const PdaConfiguration& cfg, int max_tokens) const {
  const TokenSet valid = valid_tokens(cfg);
  TokenSet out;
  for (TokenId t : valid.to_vector()) {
    PdaConfiguration next = cfg;
    try_advance(next, t);
    if (next.consumed + min_completion_tokens(next) <= max_tokens) out.insert(t);
  }
  return out.empty() ? shortest_path_tokens(cfg) : out;
}

bool Pda::accepts(const std::vector<TokenId>& tokens) const {
  PdaConfiguration cfg = initial();
  for (TokenId t : tokens) {
    if (t < 0 || t >= tok::kCount || t == tok::kEos || !valid_tokens(cfg).contains(t)) return false;
    try_advance(cfg, t);
  }
  if (!valid_tokens(cfg).contains(tok::kEos)) return false;
  try_advance(cfg, tok::kEos);
  return cfg.accepting();
}

Pda grammar_to_pda(const Grammar& g) { return Pda(g); }

int max_decode_tokens(int size, int machines) { return 16 * (size + 4) * (1 + machines); }

const Pda& cached_pda(ProblemKind kind, int size) {
  static std::mutex mutex;
  static std::map<std::pair<ProblemKind, int>, std::unique_ptr<Pda>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{kind, size}];
  if (!slot) slot = std::make_unique<Pda>(build_grammar(kind, size));
  return *slot;
}

}  // namespace cogent
