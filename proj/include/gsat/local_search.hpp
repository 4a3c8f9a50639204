#pragma once

// Random-walk GSAT: MT tries of at most MF flips each, starting every try
// from a fresh uniform random assignment.
//
// Two flip-selection rules are provided:
//   gsat-walk  with probability p flip a random variable of a random
//              unsatisfied clause, otherwise the variable (over all
//              variables) whose flip leaves the fewest unsatisfied clauses.
//   skc-walk   pick a random unsatisfied clause; take a break-0 variable of
//              it if there is one, otherwise with probability p a random
//              variable of it, otherwise one of its minimum-break variables.
// All ties are broken uniformly at random.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsat/cnf.hpp"
#include "gsat/errors.hpp"
#include "gsat/rng.hpp"

namespace gsat {

enum class Strategy { gsat_walk, skc_walk };

inline std::string_view to_string(Strategy s) {
  return s == Strategy::gsat_walk ? "gsat-walk" : "skc-walk";
}

inline std::optional<Strategy> parse_strategy(std::string_view name) {
  if (name == "gsat-walk") return Strategy::gsat_walk;
  if (name == "skc-walk") return Strategy::skc_walk;
  return std::nullopt;
}

struct SearchParams {
  std::uint64_t max_tries = 1;  // MT
  std::uint64_t max_flips = 0;  // MF, flips per try
  double noise = 0.5;
  Strategy strategy = Strategy::skc_walk;
  std::uint64_t seed = 0;

  void validate() const {
    if (max_tries < 1) throw ContractViolation("max_tries must be at least 1");
    if (!(noise >= 0.0 && noise <= 1.0)) throw ContractViolation("noise must lie in [0, 1]");
  }
};

struct SearchOutcome {
  bool solved = false;
  std::optional<Assignment> model;
  std::uint64_t tries_used = 0;
  std::uint64_t total_flips = 0;
  std::chrono::nanoseconds elapsed{0};
};

// Assignment plus incrementally maintained clause and variable scores.
//
//   true_count[c]  number of true literals in clause c
//   sole_true[c]   XOR of the variables of c's true literals, which is the
//                  unique true variable whenever true_count[c] == 1
//   break[v]       clauses whose only true literal is on v
//   make[v]        unsatisfied clauses that contain v
class SearchState {
 public:
  SearchState(const Formula &formula, const OccurrenceIndex &index, Assignment assignment)
      : formula_(&formula), index_(&index), assignment_(std::move(assignment)) {
    require_total(formula, assignment_);
    const std::size_t n = static_cast<std::size_t>(formula.num_vars()) + 1;
    true_count_.assign(formula.num_clauses(), 0);
    sole_true_.assign(formula.num_clauses(), 0);
    unsat_pos_.assign(formula.num_clauses(), npos);
    break_.assign(n, 0);
    make_.assign(n, 0);
    for (std::size_t c = 0; c < formula.num_clauses(); ++c) {
      for (Literal l : formula.clause(c))
        if (assignment_.satisfies(l)) {
          ++true_count_[c];
          sole_true_[c] ^= l.var();
        }
      if (true_count_[c] == 0) {
        mark_unsat(static_cast<ClauseId>(c));
      } else if (true_count_[c] == 1) {
        ++break_[sole_true_[c]];
      }
    }
  }

  const Formula &formula() const { return *formula_; }
  const Assignment &assignment() const { return assignment_; }
  std::size_t num_unsat() const { return unsat_.size(); }
  const std::vector<ClauseId> &unsat_clauses() const { return unsat_; }
  bool is_unsat(ClauseId c) const { return unsat_pos_[c] != npos; }
  std::uint32_t true_count(ClauseId c) const { return true_count_[c]; }
  std::uint32_t break_count(Var v) const { return break_[v]; }
  std::uint32_t make_count(Var v) const { return make_[v]; }

  // Unsatisfied clause count after flipping v.
  std::size_t unsat_after_flip(Var v) const {
    return unsat_.size() + break_[v] - make_[v];
  }

  void flip(Var v) {
    const Literal now_true = assignment_.value(v) ? Literal::negative(v) : Literal::positive(v);
    assignment_.flip(v);
    for (ClauseId c : index_->occurrences(~now_true)) {
      const std::uint32_t count = --true_count_[c];
      sole_true_[c] ^= v;
      if (count == 0) {
        --break_[v];
        mark_unsat(c);
      } else if (count == 1) {
        ++break_[sole_true_[c]];
      }
    }
    for (ClauseId c : index_->occurrences(now_true)) {
      const std::uint32_t count = ++true_count_[c];
      if (count == 1) {
        unmark_unsat(c);
        ++break_[v];
      } else if (count == 2) {
        --break_[sole_true_[c]];
      }
      sole_true_[c] ^= v;
    }
  }

 private:
  static constexpr std::size_t npos = SIZE_MAX;

  void mark_unsat(ClauseId c) {
    unsat_pos_[c] = unsat_.size();
    unsat_.push_back(c);
    for (Literal l : formula_->clause(c)) ++make_[l.var()];
  }

  void unmark_unsat(ClauseId c) {
    const std::size_t pos = unsat_pos_[c];
    const ClauseId last = unsat_.back();
    unsat_[pos] = last;
    unsat_pos_[last] = pos;
    unsat_.pop_back();
    unsat_pos_[c] = npos;
    for (Literal l : formula_->clause(c)) --make_[l.var()];
  }

  const Formula *formula_;
  const OccurrenceIndex *index_;
  Assignment assignment_;
  std::vector<std::uint32_t> true_count_;
  std::vector<Var> sole_true_;
  std::vector<std::size_t> unsat_pos_;
  std::vector<ClauseId> unsat_;
  std::vector<std::uint32_t> break_;
  std::vector<std::uint32_t> make_;
};

inline void apply_flip(SearchState &state, Var v) {
  if (v == 0 || v > state.formula().num_vars())
    throw ContractViolation("flip of unknown variable " + std::to_string(v));
  state.flip(v);
}

namespace detail {

inline ClauseId pick_unsat_clause(const SearchState &state, Rng &rng) {
  if (state.num_unsat() == 0)
    throw ContractViolation("flip selection needs an unsatisfied clause");
  const auto &unsat = state.unsat_clauses();
  const ClauseId c = unsat[rng.below(unsat.size())];
  if (state.formula().clause(c).empty())
    throw ContractViolation("flip selection on an empty clause");
  return c;
}

inline Var random_var_of(const SearchState &state, ClauseId c, Rng &rng) {
  const auto clause = state.formula().clause(c);
  return clause[rng.below(clause.size())].var();
}

}  // namespace detail

inline Var pick_flip_gsat_walk(const SearchState &state, double noise, Rng &rng) {
  if (state.num_unsat() == 0)
    throw ContractViolation("flip selection needs an unsatisfied clause");
  if (rng.chance(noise)) {
    const ClauseId c = detail::pick_unsat_clause(state, rng);
    return detail::random_var_of(state, c, rng);
  }
  const Var n = state.formula().num_vars();
  Var best = 0;
  long long best_score = 0;
  std::uint64_t ties = 0;
  for (Var v = 1; v <= n; ++v) {
    const long long score = static_cast<long long>(state.break_count(v)) -
                            static_cast<long long>(state.make_count(v));
    if (best == 0 || score < best_score) {
      best = v;
      best_score = score;
      ties = 1;
    } else if (score == best_score && rng.below(++ties) == 0) {
      best = v;
    }
  }
  return best;
}

inline Var pick_flip_skc(const SearchState &state, double noise, Rng &rng) {
  const ClauseId c = detail::pick_unsat_clause(state, rng);
  const auto clause = state.formula().clause(c);
  Var best = 0;
  std::uint32_t best_break = 0;
  std::uint64_t ties = 0;
  for (Literal l : clause) {
    const std::uint32_t b = state.break_count(l.var());
    if (best == 0 || b < best_break) {
      best = l.var();
      best_break = b;
      ties = 1;
    } else if (b == best_break && rng.below(++ties) == 0) {
      best = l.var();
    }
  }
  if (best_break == 0) return best;
  if (rng.chance(noise)) return clause[rng.below(clause.size())].var();
  return best;
}

inline Var pick_flip(const SearchState &state, Strategy strategy, double noise, Rng &rng) {
  return strategy == Strategy::gsat_walk ? pick_flip_gsat_walk(state, noise, rng)
                                         : pick_flip_skc(state, noise, rng);
}

inline Assignment random_assignment(Var num_vars, Rng &rng) {
  Assignment a(num_vars);
  for (Var v = 1; v <= num_vars; ++v) a.set(v, rng.coin());
  return a;
}

// Seed of try `t` (0-based) under the run seed.
inline std::uint64_t try_seed(std::uint64_t seed, std::uint64_t t) { return derive_seed(seed, t); }

inline SearchOutcome solve(const Formula &formula, const OccurrenceIndex &index,
                           const SearchParams &params) {
  params.validate();
  const auto start = std::chrono::steady_clock::now();
  SearchOutcome out;
  const bool hopeless = formula.has_empty_clause();
  for (std::uint64_t t = 0; t < params.max_tries && !out.solved; ++t) {
    ++out.tries_used;
    Rng rng(try_seed(params.seed, t));
    SearchState state(formula, index, random_assignment(formula.num_vars(), rng));
    if (hopeless) continue;
    for (std::uint64_t flip = 0; state.num_unsat() != 0 && flip < params.max_flips; ++flip) {
      state.flip(pick_flip(state, params.strategy, params.noise, rng));
      ++out.total_flips;
    }
    if (state.num_unsat() == 0) {
      if (!is_satisfying(formula, state.assignment()))
        throw std::logic_error("local search reported an unsound model");
      out.solved = true;
      out.model = state.assignment();
    }
  }
  out.elapsed = std::chrono::steady_clock::now() - start;
  return out;
}

inline SearchOutcome solve(const Formula &formula, const SearchParams &params) {
  return solve(formula, OccurrenceIndex(formula), params);
}

}  // namespace gsat
