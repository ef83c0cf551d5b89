#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cogent {

using TokenId = int;

namespace tok {
inline constexpr TokenId kRouteHeader = 0;     // "Route: ["
inline constexpr TokenId kRoutesHeader = 1;    // "Routes: ["
inline constexpr TokenId kSetHeader = 2;       // "Set: ["
inline constexpr TokenId kOrderHeader = 3;     // "Order: ["
inline constexpr TokenId kScheduleHeader = 4;  // "Schedule: ["
inline constexpr TokenId kSep = 5;             // ", "
inline constexpr TokenId kObjective = 6;       // "], Objective: "
inline constexpr TokenId kOpen = 7;            // "["
inline constexpr TokenId kClose = 8;           // "]"
inline constexpr TokenId kDot = 9;             // "."
inline constexpr TokenId kDigit0 = 10;         // "0".."9" are 10..19
inline constexpr TokenId kEos = 20;            // end of sequence, empty literal
inline constexpr int kCount = 21;

constexpr TokenId digit(int d) { return kDigit0 + d; }
constexpr bool is_digit(TokenId t) { return t >= kDigit0 && t < kDigit0 + 10; }
constexpr int digit_value(TokenId t) { return t - kDigit0; }
}  // namespace tok

/// Small set of token ids backed by a bit mask.
class TokenSet {
 public:
  constexpr TokenSet() = default;

  constexpr void insert(TokenId t) { bits_ |= (std::uint32_t{1} << t); }
  constexpr void erase(TokenId t) { bits_ &= ~(std::uint32_t{1} << t); }
  constexpr bool contains(TokenId t) const { return (bits_ >> t) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr std::uint32_t bits() const { return bits_; }
  constexpr TokenSet& operator|=(TokenSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr bool operator==(const TokenSet&) const = default;

  std::vector<TokenId> to_vector() const {
    std::vector<TokenId> out;
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }
  /// Lowest id in the set; the set must be non-empty.
  TokenId first() const { return std::countr_zero(bits_); }

 private:
  std::uint32_t bits_ = 0;
};

class Vocabulary {
 public:
  static const Vocabulary& standard();

  int size() const { return tok::kCount; }
  std::string_view literal(TokenId id) const { return literals_.at(static_cast<std::size_t>(id)); }
  std::optional<TokenId> find(std::string_view literal) const;
  TokenId eos() const { return tok::kEos; }

  /// Concatenated literals.
  std::string detokenize(const std::vector<TokenId>& tokens) const;
  /// Greedy longest-match tokenization ignoring any grammar. Throws ParseError at the
  /// first offset where no literal matches.
  std::vector<TokenId> tokenize(std::string_view text) const;
  /// Ids of non-empty literals that are a prefix of text, longest first.
  std::vector<TokenId> matches_at(std::string_view text) const;

 private:
  Vocabulary();
  std::array<std::string, tok::kCount> literals_;
};

}  // namespace cogent
