#include "cogent/grammar.hpp"

#include <sstream>

#include "cogent/error.hpp"

namespace cogent {

int Grammar::add_nonterminal(std::string name) {
  if (find_nonterminal(name)) throw Error(ErrorCode::GrammarInvalid, "duplicate nonterminal " + name);
  names_.push_back(std::move(name));
  return static_cast<int>(names_.size()) - 1;
}

void Grammar::add_production(int lhs, std::vector<Symbol> rhs) { productions_.push_back({lhs, std::move(rhs)}); }

std::optional<int> Grammar::find_nonterminal(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

void Grammar::validate() const {
  const int count = static_cast<int>(names_.size());
  auto bad = [](const std::string& why) { throw Error(ErrorCode::GrammarInvalid, why); };
  if (start_ < 0 || start_ >= count) bad("start symbol is not declared");
  std::vector<bool> has_rule(count, false);
  for (const auto& p : productions_) {
    if (p.lhs < 0 || p.lhs >= count) bad("production for undeclared nonterminal #" + std::to_string(p.lhs));
    has_rule[p.lhs] = true;
    for (const auto& s : p.rhs) {
      if (s.terminal) {
        if (s.id < 0 || s.id >= tok::kCount || s.id == tok::kEos) {
          bad("undeclared terminal #" + std::to_string(s.id) + " in rule for " + names_[p.lhs]);
        }
      } else if (s.id < 0 || s.id >= count) {
        bad("undeclared nonterminal #" + std::to_string(s.id) + " in rule for " + names_[p.lhs]);
      }
    }
  }
  for (int a = 0; a < count; ++a) {
    if (!has_rule[a]) bad("nonterminal " + names_[a] + " has no production");
  }
}

std::string Grammar::to_bnf() const {
  const auto& vocab = Vocabulary::standard();
  std::ostringstream os;
  std::vector<bool> done(names_.size(), false);
  auto emit = [&](int lhs) {
    os << names_[lhs] << " ->";
    bool first = true;
    for (const auto& p : productions_) {
      if (p.lhs != lhs) continue;
      os << (first ? " " : " | ");
      first = false;
      if (p.rhs.empty()) os << "ε";
      for (std::size_t i = 0; i < p.rhs.size(); ++i) {
        const auto& s = p.rhs[i];
        if (i) os << ' ';
        if (s.terminal) os << '"' << vocab.literal(s.id) << '"';
        else os << names_[s.id];
      }
    }
    os << '\n';
    done[lhs] = true;
  };
  if (start_ >= 0) emit(start_);
  for (const auto& p : productions_) {
    if (!done[p.lhs]) emit(p.lhs);
  }
  return os.str();
}

TokenId header_token(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::TSP:
    case ProblemKind::OP: return tok::kRouteHeader;
    case ProblemKind::CVRP: return tok::kRoutesHeader;
    case ProblemKind::MIS:
    case ProblemKind::MVC: return tok::kSetHeader;
    case ProblemKind::PFSP: return tok::kOrderHeader;
    case ProblemKind::JSSP: return tok::kScheduleHeader;
  }
  throw Error(ErrorCode::UnsupportedKind, "no grammar for kind");
}

namespace {

std::vector<Symbol> index_literal(int value) {
  std::vector<Symbol> out;
  for (char c : std::to_string(value)) out.push_back(Symbol::t(tok::digit(c - '0')));
  return out;
}

/// Adds `List -> Item | Item ", " List` and returns List.
int add_list(Grammar& g, const std::string& name, int item) {
  const int list = g.add_nonterminal(name);
  g.add_production(list, {Symbol::nt(item)});
  g.add_production(list, {Symbol::nt(item), Symbol::t(tok::kSep), Symbol::nt(list)});
  return list;
}

}  // namespace

Grammar build_grammar(ProblemKind kind, int size) {
  if (size < 1) throw Error(ErrorCode::DomainError, "grammar size must be at least 1");
  Grammar g;
  const int start = g.add_nonterminal("S");
  g.set_start(start);

  const bool scheduling = kind == ProblemKind::PFSP || kind == ProblemKind::JSSP;
  const int item = g.add_nonterminal(scheduling ? "Job" : "Node");
  const int first_index = scheduling ? 1 : 0;
  for (int i = first_index; i < first_index + size; ++i) g.add_production(item, index_literal(i));
  const int list = add_list(g, scheduling ? "JobList" : "NodeList", item);

  int body = list;
  switch (kind) {
    case ProblemKind::TSP:
    case ProblemKind::PFSP: break;
    case ProblemKind::OP:
    case ProblemKind::MIS:
    case ProblemKind::MVC: {
      body = g.add_nonterminal("NodeListOpt");
      g.add_production(body, {});
      g.add_production(body, {Symbol::nt(list)});
      break;
    }
    case ProblemKind::CVRP:
    case ProblemKind::JSSP: {
      const bool routes = kind == ProblemKind::CVRP;
      const int inner = g.add_nonterminal(routes ? "Route" : "Machine");
      g.add_production(inner, {Symbol::t(tok::kOpen), Symbol::nt(list), Symbol::t(tok::kClose)});
      body = add_list(g, routes ? "RouteList" : "MachineList", inner);
      break;
    }
  }

  const int number = g.add_nonterminal("Number");
  const int digits = g.add_nonterminal("Digit+");
  const int digit = g.add_nonterminal("Digit");
  g.add_production(number, {Symbol::nt(digits), Symbol::t(tok::kDot), Symbol::nt(digits)});
  g.add_production(digits, {Symbol::nt(digit)});
  g.add_production(digits, {Symbol::nt(digit), Symbol::nt(digits)});
  for (int d = 0; d < 10; ++d) g.add_production(digit, {Symbol::t(tok::digit(d))});

  g.add_production(start,
                   {Symbol::t(header_token(kind)), Symbol::nt(body), Symbol::t(tok::kObjective), Symbol::nt(number)});
  g.validate();
  return g;
}

}  // namespace cogent
