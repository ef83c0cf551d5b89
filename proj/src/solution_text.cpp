#include "cogent/solution_text.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include "cogent/error.hpp"
#include "cogent/pda.hpp"

namespace cogent {

std::vector<TokenId> tokenize_solution(ProblemKind kind, int size, std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const Pda& pda = cached_pda(kind, size);
  const auto& vocab = Vocabulary::standard();
  PdaConfiguration cfg = pda.initial();
  std::vector<TokenId> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const TokenSet valid = pda.valid_tokens(cfg);
    TokenId pick = -1;
    for (TokenId t : vocab.matches_at(text.substr(pos))) {
      if (valid.contains(t)) {
        pick = t;
        break;
      }
    }
    if (pick < 0) throw ParseError(pos, "unexpected input for " + std::string(kind_name(kind)) + " grammar");
    pda.advance_in_place(cfg, pick);
    tokens.push_back(pick);
    pos += vocab.literal(pick).size();
  }
  if (!pda.valid_tokens(cfg).contains(tok::kEos)) throw ParseError(text.size(), "incomplete sentence");
  return tokens;
}

Solution solution_from_tokens(ProblemKind kind, const std::vector<TokenId>& tokens) {
  std::vector<std::vector<int>> groups;
  std::vector<int> flat;
  int value = -1;
  int depth = 0;
  auto flush = [&] {
    if (value < 0) return;
    if (depth >= 2) groups.back().push_back(value);
    else flat.push_back(value);
    value = -1;
  };
  for (TokenId t : tokens) {
    if (t == tok::kObjective) break;
    if (tok::is_digit(t)) {
      value = (value < 0 ? 0 : value * 10) + tok::digit_value(t);
    } else if (t == header_token(kind)) {
      depth = 1;
    } else if (t == tok::kOpen) {
      flush();
      groups.emplace_back();
      depth = 2;
    } else if (t == tok::kClose) {
      flush();
      depth = 1;
    } else if (t == tok::kSep) {
      flush();
    }
  }
  flush();
  switch (kind) {
    case ProblemKind::TSP: return Tour{flat};
    case ProblemKind::OP: return PrizeRoute{flat};
    case ProblemKind::CVRP: return RouteSet{groups};
    case ProblemKind::MIS:
    case ProblemKind::MVC: return VertexSet{flat};
    case ProblemKind::PFSP: return JobOrder{flat};
    case ProblemKind::JSSP: return MachineSchedules{groups};
  }
  throw Error(ErrorCode::UnsupportedKind, "unknown kind");
}

Solution parse_solution(ProblemKind kind, int size, std::string_view text) {
  return solution_from_tokens(kind, tokenize_solution(kind, size, text));
}

namespace {

void write_list(std::string& out, const std::vector<int>& items, bool allow_empty) {
  if (items.empty() && !allow_empty) throw Error(ErrorCode::FormatError, "list must not be empty");
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] < 0) throw Error(ErrorCode::FormatError, "negative index has no literal");
    if (i) out += ", ";
    out += std::to_string(items[i]);
  }
}

void write_nested(std::string& out, const std::vector<std::vector<int>>& groups) {
  if (groups.empty()) throw Error(ErrorCode::FormatError, "need at least one inner list");
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) out += ", ";
    out += '[';
    write_list(out, groups[i], false);
    out += ']';
  }
}

std::string format_number(double value) {
  if (!std::isfinite(value) || value < 0.0) value = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

}  // namespace

std::string format_solution(ProblemKind kind, const Solution& solution, double objective_value) {
  if (!kind_accepts(kind, solution)) throw Error(ErrorCode::KindMismatch, "payload does not match kind");
  std::string out(Vocabulary::standard().literal(header_token(kind)));
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Tour>) write_list(out, s.nodes, false);
        else if constexpr (std::is_same_v<T, PrizeRoute>) write_list(out, s.nodes, true);
        else if constexpr (std::is_same_v<T, VertexSet>) write_list(out, s.vertices, true);
        else if constexpr (std::is_same_v<T, JobOrder>) write_list(out, s.jobs, false);
        else if constexpr (std::is_same_v<T, RouteSet>) write_nested(out, s.routes);
        else write_nested(out, s.machines);
      },
      solution);
  out += "], Objective: ";
  out += format_number(objective_value);
  return out;
}

std::string format_solution(const Instance& instance, const Solution& solution) {
  double value = 0.0;
  try {
    value = objective(instance, solution);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CyclicSchedule && e.code() != ErrorCode::InvalidSolution) throw;
  }
  return format_solution(instance.kind, solution, value);
}

}  // namespace cogent
