#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cogent/problem.hpp"
#include "cogent/vocabulary.hpp"

namespace cogent {

/// Tokenizes text under the grammar for (kind, size): at each offset the longest literal
/// among the currently valid tokens is taken. Trailing whitespace is ignored. Throws
/// ParseError with the offset of the first character that does not continue a sentence.
std::vector<TokenId> tokenize_solution(ProblemKind kind, int size, std::string_view text);

/// Builds the payload from a complete grammar sentence (without EOS). The stated objective
/// is not part of the payload.
Solution solution_from_tokens(ProblemKind kind, const std::vector<TokenId>& tokens);

Solution parse_solution(ProblemKind kind, int size, std::string_view text);

/// Canonical text, e.g. "Route: [0, 2, 1], Objective: 4.00". Throws FormatError when the
/// payload has no sentence in the grammar (empty tour, empty route, negative index).
std::string format_solution(ProblemKind kind, const Solution& solution, double objective_value);

/// Same, with the objective recomputed; unevaluable payloads (cyclic or partial job shop
/// schedules) are written with objective 0.00.
std::string format_solution(const Instance& instance, const Solution& solution);

}  // namespace cogent
