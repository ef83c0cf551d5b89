#include "cogent/vocabulary.hpp"

#include <algorithm>

#include "cogent/error.hpp"

namespace cogent {

Vocabulary::Vocabulary() {
  literals_ = {"Route: [", "Routes: [", "Set: [", "Order: [", "Schedule: [", ", ", "], Objective: ",
               "[",        "]",         ".",      "0",        "1",           "2",  "3",
               "4",        "5",         "6",      "7",        "8",           "9",  ""};
}

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary vocab;
  return vocab;
}

std::optional<TokenId> Vocabulary::find(std::string_view literal) const {
  for (TokenId id = 0; id < tok::kCount; ++id) {
    if (literals_[id] == literal) return id;
  }
  return std::nullopt;
}

std::string Vocabulary::detokenize(const std::vector<TokenId>& tokens) const {
  std::string out;
  for (TokenId t : tokens) out += literal(t);
  return out;
}

std::vector<TokenId> Vocabulary::matches_at(std::string_view text) const {
  std::vector<TokenId> out;
  for (TokenId id = 0; id < tok::kCount; ++id) {
    const auto& lit = literals_[id];
    if (!lit.empty() && text.substr(0, lit.size()) == lit) out.push_back(id);
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](TokenId a, TokenId b) { return literals_[a].size() > literals_[b].size(); });
  return out;
}

std::vector<TokenId> Vocabulary::tokenize(std::string_view text) const {
  std::vector<TokenId> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto m = matches_at(text.substr(pos));
    if (m.empty()) throw ParseError(pos, "no vocabulary token matches");
    out.push_back(m.front());
    pos += literals_[m.front()].size();
  }
  return out;
}

}  // namespace cogent
