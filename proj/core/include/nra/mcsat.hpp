#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "nra/cad.hpp"
#include "nra/interval_set.hpp"
#include "nra/model.hpp"

namespace nra {

enum class Status { Sat, Unsat, Unknown };

struct CheckResult {
  Status status = Status::Unknown;
  /// Sat: total over the relevant variables, extends the input model.
  Assignment model;
  /// Unsat: clause implied by the assertions that is false under the input
  /// model. Empty for plain unsatisfiability.
  Clause interpolant;
};

struct Statistics {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t learned = 0;
  std::uint64_t checks = 0;
};

struct SolverLimits {
  /// Zero means unlimited.
  std::uint64_t max_conflicts = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Model-constructing solver for quantifier-free nonlinear real arithmetic
/// with Boolean structure. Supports checking modulo a partial model, in which
/// case an unsatisfiable answer comes with a model interpolant.
///
/// Real variables are assigned in a fixed effective order: variables of the
/// input model first, then the remaining ones in the solver's VarOrder.
class Solver {
 public:
  enum class Reason { Decision, Propagation, ModelDecision };

  struct TrailEntry {
    bool is_real = false;
    Atom atom = BoolAtom{0};  // Boolean entries
    bool value = false;
    Var var = kNoVar;  // real entries
    Reason reason = Reason::Decision;
  };

  Solver();
  explicit Solver(VarOrder order);
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  void set_order(VarOrder order);
  [[nodiscard]] const VarOrder& order() const;
  void set_limits(const SolverLimits& limits);

  void assert_formula(const Formula& f);
  CheckResult check();
  CheckResult check_modulo(const Assignment& m0);

  [[nodiscard]] const Statistics& stats() const;
  [[nodiscard]] const std::vector<Formula>& assertions() const;

  // Step-wise interface exposing the individual moves of the search. start()
  // resets the trail for a check modulo m0 and must precede the others.
  void start(const Assignment& m0 = {});
  /// Saturates propagation; returns a conflict clause if one is found.
  std::optional<Clause> propagate();
  /// Assigns a Boolean atom as a decision.
  void decide(const Atom& a, bool value);
  /// Assigns the current stage variable x. Without a value the feasible set
  /// is sampled. Returns an evaluation conflict (not C or C) if the value
  /// contradicts an assigned constraint.
  std::optional<Clause> decide(Var x, std::optional<AlgebraicNumber> value = std::nullopt, bool model = false);
  /// Resolves and backtracks. Returns the clause and whether it is final.
  std::pair<Clause, bool> analyze_conflict(const Clause& conflict);
  /// Resolves all propagated literals out of a final clause.
  Clause analyze_final(const Clause& conflict);
  /// Explanation of an empty feasible set for the stage variable, if empty.
  std::optional<Clause> explain_unit_conflict();
  /// True iff the atom is assigned `value` on the trail or evaluates to it.
  [[nodiscard]] bool can_evaluate(const Atom& a, bool value) const;
  [[nodiscard]] std::vector<TrailEntry> trail() const;
  /// Current values on the trail.
  [[nodiscard]] Assignment trail_assignment() const;
  /// Feasible set of the current stage variable.
  [[nodiscard]] IntervalSet feasible_set() const;
  /// Lowest unassigned real variable in the effective order, if any.
  [[nodiscard]] std::optional<Var> stage_var() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nra
