#pragma once

#include <optional>
#include <vector>

#include "nra/model.hpp"

namespace nra {

/// Conjunction of atoms constraining one variable in terms of lower ones.
struct CellLevel {
  Var x;
  std::vector<Atom> atoms;  // empty means true
};

/// Cylindrical cell description, lowest level first.
struct CellDescription {
  std::vector<CellLevel> levels;

  [[nodiscard]] const CellLevel* level(Var x) const;
  [[nodiscard]] std::vector<Atom> atoms() const;
  [[nodiscard]] Formula to_formula() const;
};

/// Normalized projection factors of f: primitive, positive leading
/// coefficient, monomial content split off. Constants yield nothing.
std::vector<Polynomial> projection_factors(const Polynomial& f);

/// Closure of F under the projection operator (leading coefficients plus
/// further coefficients until a non-zero constant, discriminants, pairwise
/// resultants), optionally also under derivatives in the top variable.
std::vector<Polynomial> project(const std::vector<Polynomial>& F, const VarOrder& order,
                                bool with_derivatives = false);

/// f < 0, f = 0 or f > 0 according to the sign of f at m. f must not be constant.
Atom sign_condition(const Polynomial& f, const RealAssignment& m);

struct CellOptions {
  bool basic = false;
  /// Polynomials whose top variable is this one are only projected: no
  /// bounds are emitted for it and it need not be assigned.
  std::optional<Var> project_only;
};

/// Single cell of the decomposition induced by F that contains m.
CellDescription construct_cell(const std::vector<Polynomial>& F, const RealAssignment& m, const VarOrder& order,
                               const CellOptions& options = {});

/// Extended description: root atoms bounding each variable.
CellDescription cell_extended(const std::vector<Polynomial>& F, const RealAssignment& m, const VarOrder& order);
/// Basic description: sign conditions of each bounding polynomial and its
/// derivatives in the level variable.
CellDescription cell_basic(const std::vector<Polynomial>& F, const RealAssignment& m, const VarOrder& order);

}  // namespace nra
