#pragma once

// DIMACS CNF reading and writing.
//
// Accepted input: any number of "c ..." comment lines, exactly one
// "p cnf <vars> <clauses>" header before the first clause, then
// whitespace-separated literals with each clause terminated by 0. Clauses
// may span lines. A line starting with '%' ends the clause section (the
// SATLIB convention). Repeated literals inside one clause are collapsed;
// a clause holding both x and -x is rejected.

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gsat/cnf.hpp"

namespace gsat {

struct DimacsDocument {
  std::vector<std::string> comments;  // text after "c ", in file order
  Formula formula;
};

namespace detail {

inline bool is_blank(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\f' || ch == '\v'; }

inline std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_blank(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T &out) {
  const char *end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace detail

inline DimacsDocument read_dimacs(std::istream &in) {
  DimacsDocument doc;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  long long declared_vars = 0;
  long long declared_clauses = 0;
  std::vector<std::vector<Literal>> clauses;
  std::vector<Literal> current;
  std::size_t clause_start_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    std::size_t first = 0;
    while (first < view.size() && detail::is_blank(view[first])) ++first;
    if (first == view.size()) continue;
    if (view[first] == 'c' && (first + 1 == view.size() || detail::is_blank(view[first + 1]))) {
      std::string_view text = view.substr(first + 1);
      if (!text.empty() && text.front() == ' ') text.remove_prefix(1);
      while (!text.empty() && text.back() == '\r') text.remove_suffix(1);
      doc.comments.emplace_back(text);
      continue;
    }
    if (view[first] == '%') break;
    if (view[first] == 'p') {
      if (have_header) throw ParseError(lineno, "duplicate header");
      auto tokens = detail::split_tokens(view.substr(first));
      if (tokens.size() != 4 || tokens[0] != "p" || tokens[1] != "cnf" ||
          !detail::parse_number(tokens[2], declared_vars) ||
          !detail::parse_number(tokens[3], declared_clauses) || declared_vars < 0 ||
          declared_clauses < 0 || declared_vars > (1LL << 30))
        throw ParseError(lineno, "malformed header, expected 'p cnf <vars> <clauses>'");
      have_header = true;
      clauses.reserve(static_cast<std::size_t>(declared_clauses));
      continue;
    }
    if (!have_header) throw ParseError(lineno, "clause data before 'p cnf' header");
    for (auto token : detail::split_tokens(view)) {
      long long value = 0;
      if (!detail::parse_number(token, value))
        throw ParseError(lineno, "invalid literal '" + std::string(token) + "'");
      if (value == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const long long magnitude = value < 0 ? -value : value;
      if (magnitude > declared_vars)
        throw ParseError(lineno, "literal " + std::to_string(value) + " exceeds declared " +
                                     std::to_string(declared_vars) + " variables");
      if (current.empty()) clause_start_line = lineno;
      const Literal lit(static_cast<int>(value));
      bool duplicate = false;
      for (Literal seen : current) {
        if (seen == ~lit)
          throw ParseError(lineno, "clause contains both " + std::to_string(lit.var()) +
                                       " and -" + std::to_string(lit.var()));
        if (seen == lit) duplicate = true;
      }
      if (!duplicate) current.push_back(lit);
    }
  }
  if (!have_header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!current.empty()) throw ParseError(clause_start_line, "clause not terminated by 0");
  if (static_cast<long long>(clauses.size()) != declared_clauses)
    throw ParseError(lineno, "header declares " + std::to_string(declared_clauses) +
                                 " clauses but " + std::to_string(clauses.size()) + " found");
  doc.formula = Formula(static_cast<Var>(declared_vars), clauses);
  return doc;
}

inline DimacsDocument read_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_dimacs(in);
}

inline Formula parse_dimacs(std::istream &in) { return read_dimacs(in).formula; }
inline Formula parse_dimacs(std::string_view text) { return read_dimacs(text).formula; }

inline void write_dimacs(std::ostream &out, const Formula &f,
                         const std::vector<std::string> &comments = {}) {
  for (const auto &comment : comments) out << "c " << comment << '\n';
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  std::string buffer;
  for (std::size_t i = 0; i < f.num_clauses(); ++i) {
    buffer.clear();
    for (Literal l : f.clause(i)) {
      buffer += std::to_string(l.dimacs());
      buffer += ' ';
    }
    buffer += "0\n";
    out << buffer;
  }
}

inline std::string emit_dimacs(const Formula &f, const std::vector<std::string> &comments = {}) {
  std::ostringstream out;
  write_dimacs(out, f, comments);
  return out.str();
}

// "v 1 -2 3 ... 0", the model line of the SAT competition output format.
inline std::string model_line(const Assignment &a) {
  std::string line = "v";
  for (Var v = 1; v <= a.num_vars(); ++v) {
    line += ' ';
    if (!a.value(v)) line += '-';
    line += std::to_string(v);
  }
  line += " 0";
  return line;
}

}  // namespace gsat
