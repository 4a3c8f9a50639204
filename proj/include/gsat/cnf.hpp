#pragma once

// Clausal formulas, total assignments, evaluation and occurrence lists.

#include <cstdint>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "gsat/errors.hpp"

namespace gsat {

using Var = std::uint32_t;
using ClauseId = std::uint32_t;

// A signed DIMACS literal: +v is v, -v is the negation of v.
class Literal {
 public:
  constexpr Literal() = default;
  constexpr explicit Literal(int dimacs) : value_(dimacs) {}

  static constexpr Literal positive(Var v) { return Literal(static_cast<int>(v)); }
  static constexpr Literal negative(Var v) { return Literal(-static_cast<int>(v)); }

  constexpr Var var() const { return static_cast<Var>(value_ < 0 ? -value_ : value_); }
  constexpr bool negated() const { return value_ < 0; }
  constexpr int dimacs() const { return value_; }
  constexpr Literal operator~() const { return Literal(-value_); }

  // Dense index in [0, 2 * num_vars): 2(v-1) for v, 2(v-1)+1 for -v.
  constexpr std::size_t code() const {
    return 2 * (static_cast<std::size_t>(var()) - 1) + (negated() ? 1 : 0);
  }

  friend constexpr bool operator==(Literal, Literal) = default;

 private:
  int value_ = 0;
};

// Total truth valuation over variables 1..num_vars.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(Var num_vars, bool initial = false)
      : values_(static_cast<std::size_t>(num_vars) + 1, initial ? 1 : 0) {
    values_[0] = 0;
  }

  // values[i] is the value of variable i + 1.
  static Assignment from_values(const std::vector<bool> &values) {
    Assignment a(static_cast<Var>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) a.values_[i + 1] = values[i];
    return a;
  }

  Var num_vars() const {
    return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1);
  }
  bool value(Var v) const { return values_[v] != 0; }
  void set(Var v, bool b) { values_[v] = b ? 1 : 0; }
  void flip(Var v) { values_[v] ^= 1; }
  bool satisfies(Literal l) const { return value(l.var()) != l.negated(); }

  friend bool operator==(const Assignment &, const Assignment &) = default;

 private:
  std::vector<std::uint8_t> values_;
};

// Immutable CNF. Literals are stored flat, clause i spanning
// [offsets[i], offsets[i+1]). Clause order and literal order are kept as
// given; duplicate clauses are allowed.
class Formula {
 public:
  Formula() : offsets_{0} {}

  // Throws InvalidFormula if a literal is 0 or exceeds num_vars, or if a
  // clause mentions a variable twice.
  Formula(Var num_vars, const std::vector<std::vector<Literal>> &clauses)
      : num_vars_(num_vars) {
    offsets_.reserve(clauses.size() + 1);
    offsets_.push_back(0);
    for (const auto &clause : clauses) add_clause(clause);
  }

  Formula(Var num_vars, std::initializer_list<std::initializer_list<int>> clauses)
      : num_vars_(num_vars) {
    offsets_.push_back(0);
    std::vector<Literal> buffer;
    for (const auto &clause : clauses) {
      buffer.clear();
      for (int lit : clause) buffer.emplace_back(lit);
      add_clause(buffer);
    }
  }

  Var num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return offsets_.size() - 1; }
  std::size_t num_literals() const { return literals_.size(); }

  std::span<const Literal> clause(std::size_t i) const {
    return {literals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  bool has_empty_clause() const {
    for (std::size_t i = 0; i < num_clauses(); ++i)
      if (offsets_[i] == offsets_[i + 1]) return true;
    return false;
  }

  friend bool operator==(const Formula &, const Formula &) = default;

 private:
  void add_clause(std::span<const Literal> clause) {
    const std::size_t begin = literals_.size();
    for (Literal lit : clause) {
      if (lit.dimacs() == 0 || lit.var() > num_vars_)
        throw InvalidFormula("literal " + std::to_string(lit.dimacs()) +
                             " out of range 1.." + std::to_string(num_vars_));
      for (std::size_t j = begin; j < literals_.size(); ++j)
        if (literals_[j].var() == lit.var())
          throw InvalidFormula("variable " + std::to_string(lit.var()) +
                               " occurs twice in clause " +
                               std::to_string(num_clauses() + 1));
      literals_.push_back(lit);
    }
    offsets_.push_back(literals_.size());
  }

  Var num_vars_ = 0;
  std::vector<Literal> literals_;
  std::vector<std::size_t> offsets_;
};

inline void require_total(const Formula &f, const Assignment &a) {
  if (a.num_vars() < f.num_vars())
    throw ContractViolation("assignment covers " + std::to_string(a.num_vars()) +
                            " of " + std::to_string(f.num_vars()) + " variables");
}

inline bool clause_satisfied(std::span<const Literal> clause, const Assignment &a) {
  for (Literal l : clause)
    if (a.satisfies(l)) return true;
  return false;
}

inline std::size_t num_unsatisfied(const Formula &f, const Assignment &a) {
  require_total(f, a);
  std::size_t count = 0;
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    if (!clause_satisfied(f.clause(i), a)) ++count;
  return count;
}

inline bool is_satisfying(const Formula &f, const Assignment &a) {
  require_total(f, a);
  for (std::size_t i = 0; i < f.num_clauses(); ++i)
    if (!clause_satisfied(f.clause(i), a)) return false;
  return true;
}

// Clause ids per literal, in ascending clause order.
class OccurrenceIndex {
 public:
  OccurrenceIndex() : offsets_{0} {}

  explicit OccurrenceIndex(const Formula &f)
      : offsets_(2 * static_cast<std::size_t>(f.num_vars()) + 1, 0) {
    for (std::size_t c = 0; c < f.num_clauses(); ++c)
      for (Literal l : f.clause(c)) ++offsets_[l.code() + 1];
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    clauses_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t c = 0; c < f.num_clauses(); ++c)
      for (Literal l : f.clause(c)) clauses_[fill[l.code()]++] = static_cast<ClauseId>(c);
  }

  std::span<const ClauseId> occurrences(Literal l) const {
    return {clauses_.data() + offsets_[l.code()], offsets_[l.code() + 1] - offsets_[l.code()]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<ClauseId> clauses_;
};

inline OccurrenceIndex build_occurrence_index(const Formula &f) { return OccurrenceIndex(f); }

}  // namespace gsat
