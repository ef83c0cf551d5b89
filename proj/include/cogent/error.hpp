#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cogent {

enum class ErrorCode {
  IndexOutOfRange,
  KindMismatch,
  CyclicSchedule,
  InvalidSolution,
  ZeroReference,
  EmptyBatch,
  InstanceInvalid,
  UnsupportedKind,
  GrammarInvalid,
  LeftRecursion,
  NotLL1,
  InvalidToken,
  ParseError,
  PolicyFailure,
  TooFewSamples,
  BestNotInSamples,
  DomainError,
  UnsupportedDistribution,
  InvalidDistribution,
  DegenerateRewards,
  TooLarge,
  FormatError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// ParseError carries the character offset of the first token that did not fit the grammar.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message)
      : Error(ErrorCode::ParseError, "at offset " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::CyclicSchedule: return "CyclicSchedule";
    case ErrorCode::InvalidSolution: return "InvalidSolution";
    case ErrorCode::ZeroReference: return "ZeroReference";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::InstanceInvalid: return "InstanceInvalid";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::GrammarInvalid: return "GrammarInvalid";
    case ErrorCode::LeftRecursion: return "LeftRecursion";
    case ErrorCode::NotLL1: return "NotLL1";
    case ErrorCode::InvalidToken: return "InvalidToken";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PolicyFailure: return "PolicyFailure";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::BestNotInSamples: return "BestNotInSamples";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnsupportedDistribution: return "UnsupportedDistribution";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::DegenerateRewards: return "DegenerateRewards";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

}  // namespace cogent
