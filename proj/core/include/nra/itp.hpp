#pragma once

#include <cstddef>
#include <vector>

#include "nra/mcsat.hpp"

namespace nra {

/// One refinement step of the interpolation loop: a model of B (restricted
/// to the shared variables) and the clause that refuted it.
struct InterpolantStep {
  Assignment model;
  Clause clause;
};
using InterpolantLog = std::vector<InterpolantStep>;

struct InterpolationOptions {
  /// Rewrite root constraints in interpolant clauses into polynomial ones.
  bool basic = true;
  SolverLimits limits;
  std::size_t max_iterations = 10000;
};

struct InterpolationResult {
  Status status = Status::Unknown;
  /// Unsat: conjunction of clauses over the shared variables.
  std::vector<Clause> interpolant;
  /// Sat: model of A and B.
  Assignment model;
  InterpolantLog log;
  std::size_t iterations = 0;
};

/// Variables shared between a and b.
std::set<Var> shared_vars(const Formula& a, const Formula& b);

/// Order placing shared variables lowest, then those only in a, then the rest.
VarOrder interpolation_order(const Formula& a, const Formula& b);

/// Craig interpolation by refuting models of B with model interpolants of A.
InterpolationResult interpolate(const Formula& a, const Formula& b, const InterpolationOptions& options = {});

/// Replaces root constraints of a clause false under m by the negated atoms of
/// a basic cell around m. Throws if some literal is not false under m.
Clause eliminate_extended(const Clause& clause, const Assignment& m, const VarOrder& order = {});

}  // namespace nra
