#pragma once

// Davis-Putnam-Logemann-Loveland search: satisfiability decision and exact
// model counting. Plain chronological backtracking over counter-based unit
// propagation; no learning, no restarts.
//
// Branching picks the unassigned variable occurring most often in the
// shortest open clauses, lowest index on ties. Pure literals are fixed
// only when deciding; counting branches both polarities of every decision
// and credits 2^free for a branch whose clauses are all satisfied.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsat/cnf.hpp"

namespace gsat {

using Count = unsigned __int128;

inline std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return digits;
}

enum class TruthValue : std::uint8_t { unassigned, false_, true_ };
enum class Reason : std::uint8_t { decision, propagated };

struct TrailEntry {
  Literal literal;  // the literal made true
  Reason reason;
};

// Three-valued assignment with an assignment trail.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(Var num_vars)
      : values_(static_cast<std::size_t>(num_vars) + 1, TruthValue::unassigned) {}

  Var num_vars() const {
    return values_.empty() ? 0 : static_cast<Var>(values_.size() - 1);
  }
  TruthValue value(Var v) const { return values_[v]; }
  bool assigned(Var v) const { return values_[v] != TruthValue::unassigned; }

  TruthValue value(Literal l) const {
    const TruthValue v = values_[l.var()];
    if (v == TruthValue::unassigned || !l.negated()) return v;
    return v == TruthValue::true_ ? TruthValue::false_ : TruthValue::true_;
  }

  void assign(Literal l, Reason reason) {
    if (l.var() == 0 || l.var() > num_vars())
      throw ContractViolation("literal " + std::to_string(l.dimacs()) + " out of range");
    if (assigned(l.var()))
      throw ContractViolation("variable " + std::to_string(l.var()) + " already assigned");
    values_[l.var()] = l.negated() ? TruthValue::false_ : TruthValue::true_;
    trail_.push_back({l, reason});
  }

  TrailEntry unassign_last() {
    const TrailEntry last = trail_.back();
    trail_.pop_back();
    values_[last.literal.var()] = TruthValue::unassigned;
    return last;
  }

  std::span<const TrailEntry> trail() const { return trail_; }
  std::size_t num_assigned() const { return trail_.size(); }

  // Assigns every open variable `fill` and returns the total assignment.
  Assignment completed(bool fill = false) const {
    Assignment a(num_vars());
    for (Var v = 1; v <= num_vars(); ++v)
      a.set(v, values_[v] == TruthValue::unassigned ? fill : values_[v] == TruthValue::true_);
    return a;
  }

 private:
  std::vector<TruthValue> values_;
  std::vector<TrailEntry> trail_;
};

struct PropagationResult {
  bool conflict = false;
  PartialAssignment partial;  // fixpoint when !conflict
};

struct CountResult {
  Count count = 0;
  bool capped = false;  // search stopped because the count exceeded the cap
};

inline constexpr Count default_count_cap = 1'000'000;

class DpllSolver {
 public:
  explicit DpllSolver(const Formula &formula)
      : formula_(formula),
        index_(formula),
        partial_(formula.num_vars()),
        true_count_(formula.num_clauses(), 0),
        false_count_(formula.num_clauses(), 0),
        var_score_(static_cast<std::size_t>(formula.num_vars()) + 1, 0),
        pos_seen_(static_cast<std::size_t>(formula.num_vars()) + 1, 0),
        neg_seen_(static_cast<std::size_t>(formula.num_vars()) + 1, 0) {
    for (std::size_t c = 0; c < formula.num_clauses(); ++c) {
      const auto size = formula.clause(c).size();
      if (size == 0) conflict_ = true;
      if (size == 1) pending_.push_back(formula.clause(c)[0]);
    }
  }

  const PartialAssignment &partial() const { return partial_; }

  // Makes `l` true as a decision unless it already is. Returns false on
  // conflict.
  bool assume(Literal l, Reason reason = Reason::decision) {
    const TruthValue v = partial_.value(l);
    if (v == TruthValue::true_) return !conflict_;
    if (v == TruthValue::false_) {
      conflict_ = true;
      return false;
    }
    assign(l, reason);
    return !conflict_;
  }

  // Propagates pending units to fixpoint. Returns false on conflict.
  bool propagate() {
    while (!conflict_ && !pending_.empty()) {
      const Literal unit = pending_.back();
      pending_.pop_back();
      const TruthValue v = partial_.value(unit);
      if (v == TruthValue::true_) continue;
      if (v == TruthValue::false_) {
        conflict_ = true;
        break;
      }
      assign(unit, Reason::propagated);
    }
    if (conflict_) pending_.clear();
    return !conflict_;
  }

  std::optional<Assignment> decide() {
    if (!propagate()) return std::nullopt;
    if (!search_decide()) return std::nullopt;
    return partial_.completed(false);
  }

  CountResult count(std::optional<Count> cap) {
    cap_ = cap;
    total_ = 0;
    capped_ = false;
    if (propagate()) search_count();
    if (capped_) return {*cap_, true};
    return {total_, false};
  }

 private:
  void assign(Literal l, Reason reason) {
    partial_.assign(l, reason);
    for (ClauseId c : index_.occurrences(l)) {
      if (true_count_[c]++ == 0) ++satisfied_;
    }
    for (ClauseId c : index_.occurrences(~l)) {
      const std::uint32_t falses = ++false_count_[c];
      if (true_count_[c] != 0) continue;
      const auto clause = formula_.clause(c);
      if (falses == clause.size()) {
        conflict_ = true;
      } else if (falses + 1 == clause.size()) {
        for (Literal other : clause)
          if (!partial_.assigned(other.var())) {
            pending_.push_back(other);
            break;
          }
      }
    }
  }

  void backtrack(std::size_t trail_size) {
    while (partial_.num_assigned() > trail_size) {
      const Literal l = partial_.unassign_last().literal;
      for (ClauseId c : index_.occurrences(l))
        if (--true_count_[c] == 0) --satisfied_;
      for (ClauseId c : index_.occurrences(~l)) --false_count_[c];
    }
    pending_.clear();
    conflict_ = false;
  }

  bool all_satisfied() const { return satisfied_ == formula_.num_clauses(); }

  struct Branch {
    Literal literal;  // polarity tried first
    bool found = false;
  };

  // MOMS choice over the open clauses of minimum residual length.
  Branch choose_branch() {
    std::size_t shortest = SIZE_MAX;
    for (std::size_t c = 0; c < formula_.num_clauses(); ++c) {
      if (true_count_[c] != 0) continue;
      const std::size_t residual = formula_.clause(c).size() - false_count_[c];
      if (residual < shortest) shortest = residual;
    }
    Branch best;
    if (shortest == SIZE_MAX) return best;
    std::fill(var_score_.begin(), var_score_.end(), 0);
    std::fill(pos_seen_.begin(), pos_seen_.end(), 0);
    for (std::size_t c = 0; c < formula_.num_clauses(); ++c) {
      if (true_count_[c] != 0) continue;
      if (formula_.clause(c).size() - false_count_[c] != shortest) continue;
      for (Literal l : formula_.clause(c)) {
        if (partial_.assigned(l.var())) continue;
        ++var_score_[l.var()];
        if (!l.negated()) ++pos_seen_[l.var()];
      }
    }
    std::uint32_t best_score = 0;
    for (Var v = 1; v <= formula_.num_vars(); ++v) {
      if (var_score_[v] > best_score) {
        best_score = var_score_[v];
        const bool positive_first = 2 * pos_seen_[v] >= var_score_[v];
        best.literal = positive_first ? Literal::positive(v) : Literal::negative(v);
        best.found = true;
      }
    }
    return best;
  }

  // Fixes every literal that occurs in open clauses with one polarity only.
  // Returns true if anything was assigned.
  bool assign_pure_literals() {
    std::fill(pos_seen_.begin(), pos_seen_.end(), 0);
    std::fill(neg_seen_.begin(), neg_seen_.end(), 0);
    for (std::size_t c = 0; c < formula_.num_clauses(); ++c) {
      if (true_count_[c] != 0) continue;
      for (Literal l : formula_.clause(c)) {
        if (partial_.assigned(l.var())) continue;
        (l.negated() ? neg_seen_ : pos_seen_)[l.var()] = 1;
      }
    }
    bool any = false;
    for (Var v = 1; v <= formula_.num_vars(); ++v) {
      if (partial_.assigned(v) || pos_seen_[v] == neg_seen_[v]) continue;
      assign(pos_seen_[v] ? Literal::positive(v) : Literal::negative(v), Reason::propagated);
      any = true;
    }
    return any;
  }

  bool search_decide() {
    while (!all_satisfied() && assign_pure_literals()) {
      if (!propagate()) return false;
    }
    if (all_satisfied()) return true;
    const Branch branch = choose_branch();
    if (!branch.found) return false;
    const std::size_t mark = partial_.num_assigned();
    for (Literal choice : {branch.literal, ~branch.literal}) {
      assign(choice, Reason::decision);
      if (propagate() && search_decide()) return true;
      backtrack(mark);
    }
    return false;
  }

  void add_models(std::size_t free_vars) {
    const Count limit = cap_ ? *cap_ : ~Count{0};
    if (free_vars >= 128) {
      if (!cap_) throw CountOverflow("model count exceeds 2^128");
      capped_ = true;
      return;
    }
    const Count add = Count{1} << free_vars;
    if (total_ > ~Count{0} - add) {
      if (!cap_) throw CountOverflow("model count exceeds 2^128");
      capped_ = true;
      return;
    }
    total_ += add;
    if (cap_ && total_ > limit) capped_ = true;
  }

  void search_count() {
    if (all_satisfied()) {
      add_models(formula_.num_vars() - partial_.num_assigned());
      return;
    }
    const Branch branch = choose_branch();
    if (!branch.found) return;
    const std::size_t mark = partial_.num_assigned();
    for (Literal choice : {Literal::positive(branch.literal.var()),
                           Literal::negative(branch.literal.var())}) {
      assign(choice, Reason::decision);
      if (propagate()) search_count();
      backtrack(mark);
      if (capped_) return;
    }
  }

  const Formula &formula_;
  OccurrenceIndex index_;
  PartialAssignment partial_;
  std::vector<std::uint32_t> true_count_;
  std::vector<std::uint32_t> false_count_;
  std::vector<std::uint32_t> var_score_;
  std::vector<std::uint32_t> pos_seen_;
  std::vector<std::uint32_t> neg_seen_;
  std::vector<Literal> pending_;
  std::size_t satisfied_ = 0;
  bool conflict_ = false;

  std::optional<Count> cap_;
  Count total_ = 0;
  bool capped_ = false;
};

// Unit propagation to fixpoint starting from `partial`. Assignments already
// in `partial` keep their trail order and tags; implied literals are
// appended as propagated.
inline PropagationResult unit_propagate(const Formula &formula, const PartialAssignment &partial) {
  if (partial.num_vars() < formula.num_vars())
    throw ContractViolation("partial assignment covers fewer variables than the formula");
  DpllSolver solver(formula);
  bool ok = true;
  for (const TrailEntry &entry : partial.trail()) {
    if (entry.literal.var() > formula.num_vars())
      throw ContractViolation("partial assignment mentions an unknown variable");
    ok = solver.assume(entry.literal, entry.reason) && ok;
  }
  ok = ok && solver.propagate();
  if (!ok) return {true, {}};
  return {false, solver.partial()};
}

inline std::optional<Assignment> decide_sat(const Formula &formula) {
  DpllSolver solver(formula);
  return solver.decide();
}

// Exact count, or {cap, capped=true} once the count is known to exceed cap.
inline CountResult count_models(const Formula &formula,
                                std::optional<Count> cap = default_count_cap) {
  if (cap && *cap == 0) throw ContractViolation("count cap must be positive");
  DpllSolver solver(formula);
  return solver.count(cap);
}

}  // namespace gsat
