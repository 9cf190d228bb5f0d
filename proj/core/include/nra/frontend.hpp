#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nra/itp.hpp"
#include "nra/mcsat.hpp"
#include "nra/model.hpp"

namespace nra {

/// Syntax or sort error with a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column);
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

enum class AssertKind { Plain, A, B };

struct ScriptCommand {
  enum class Kind { CheckSat, CheckSatAssumingModel, ComputeInterpolant, GetModel };
  Kind kind = Kind::CheckSat;
  Assignment model;  // check-sat-assuming-model
  std::size_t line = 0;
};

struct ProblemScript {
  VarTable vars;
  std::vector<std::pair<AssertKind, Formula>> assertions;
  std::vector<ScriptCommand> commands;

  /// Conjunction of the assertions of one kind.
  [[nodiscard]] Formula conjunction(AssertKind kind) const;
  /// Conjunction of all assertions.
  [[nodiscard]] Formula all() const;
};

struct TransitionSystem {
  VarTable vars;
  /// next[i] is the primed copy of state[i].
  std::vector<Var> state, next;
  Formula init, trans, prop;

  [[nodiscard]] Var primed(Var s) const;
};

ProblemScript parse_script(std::string_view text);
TransitionSystem parse_system(std::string_view text);

/// A single term over already declared variables.
Formula parse_formula(std::string_view text, const VarTable& vars);
/// Values either as `(x 2) (y (/ 1 2))` or as `x=2,y=1/2`.
Assignment parse_model(std::string_view text, const VarTable& vars);

std::string print_term(const Formula& f, const VarTable& vars);
std::string print_term(const Clause& c, const VarTable& vars);
/// Conjunction of clauses; `true` when empty.
std::string print_term(const std::vector<Clause>& cnf, const VarTable& vars);
std::string print_value(const Value& v);
/// `(model (define-fun x () Real 2) ...)` over the variables of the table.
std::string print_model(const Assignment& m, const VarTable& vars);
std::string print_system(const TransitionSystem& s);

struct ScriptOptions {
  SolverLimits limits;
  /// Interpolants are rewritten into polynomial constraints.
  bool basic = true;
};

struct ScriptOutcome {
  Statistics stats;
  std::size_t interpolant_clauses = 0;
  bool any_unknown = false;
};

/// Runs the commands of a script, writing responses to out.
ScriptOutcome run_script(const ProblemScript& script, std::ostream& out, const ScriptOptions& options = {});

}  // namespace nra
