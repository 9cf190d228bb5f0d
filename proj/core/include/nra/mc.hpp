#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nra/frontend.hpp"

namespace nra {

/// States over the state variables of a system, one per step.
using Trace = std::vector<Assignment>;

enum class Verdict { Valid, Invalid, Unknown };
enum class Engine { Bmc, KInduction, Itp };

struct MCResult {
  Verdict verdict = Verdict::Unknown;
  /// Valid: over the state variables. Inductive when k == 1, otherwise the
  /// property itself, k-inductive.
  Formula invariant;
  unsigned k = 0;
  /// Invalid: counterexample from an initial state to a bad one.
  Trace trace;
  std::size_t interpolant_clauses = 0;
  Statistics stats;
};

struct MCOptions {
  Engine engine = Engine::Itp;
  unsigned max_k = 10;
  SolverLimits limits;
};

/// Shortest counterexample with at most k transitions, if any.
std::optional<Trace> bmc(const TransitionSystem& sys, unsigned k, const SolverLimits& limits = {});

/// Proves p by k-induction at exactly depth k; Unknown when a check fails.
MCResult kinduction(const TransitionSystem& sys, const Formula& p, unsigned k, const SolverLimits& limits = {});

/// Interpolation-based reachability with lookahead up to max_k steps.
MCResult itp_reach(const TransitionSystem& sys, const Formula& p, unsigned max_k, const SolverLimits& limits = {});

/// Dispatches to an engine and re-verifies the verdict.
MCResult check(const TransitionSystem& sys, const MCOptions& options);

/// Init at step 0, transitions between consecutive steps, bad last state.
bool replay(const TransitionSystem& sys, const Trace& trace, const Formula& p);
/// Init implies inv, inv is preserved by transitions, inv implies p.
bool is_inductive_invariant(const TransitionSystem& sys, const Formula& inv, const Formula& p,
                            const SolverLimits& limits = {});

std::string print_trace(const TransitionSystem& sys, const Trace& trace);
const char* verdict_name(Verdict v);

}  // namespace nra
