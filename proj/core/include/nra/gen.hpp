#pragma once

#include <set>
#include <vector>

#include "nra/cad.hpp"
#include "nra/model.hpp"

namespace nra {

/// Literals true in m whose conjunction implies f. Conjunctions keep every
/// child, disjunctions their first true child. Throws unless f is true in m.
std::vector<Literal> implicant(const Formula& f, const Assignment& m);

/// Formula over `keep` that holds in m and under which f is satisfiable in
/// the remaining variables: the kept levels of a basic cell around m.
/// The order is adjusted so that kept variables come lowest.
Formula generalize(const Formula& f, const Assignment& m, const std::set<Var>& keep, const VarOrder& order = {});

}  // namespace nra
