#include "nra/gen.hpp"

#include <stdexcept>

namespace nra {

namespace {

void collect(const Formula& f, bool pos, const Assignment& m, std::vector<Literal>& out) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False: return;
    case Kind::Atom: {
      Literal l{f.as_atom(), pos};
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
      return;
    }
    case Kind::Not: collect(f.children()[0], !pos, m, out); return;
    case Kind::And:
    case Kind::Or: {
      bool all = (f.kind() == Kind::And) == pos;
      for (auto& c : f.children()) {
        if (all) {
          collect(c, pos, m, out);
        } else if (evaluate(c, m) == tri(pos)) {
          collect(c, pos, m, out);
          return;
        }
      }
      return;
    }
  }
}

}  // namespace

std::vector<Literal> implicant(const Formula& f, const Assignment& m) {
  if (evaluate(f, m) != Tri::True) throw std::invalid_argument("implicant: formula is not true in the model");
  std::vector<Literal> out;
  collect(f, true, m, out);
  return out;
}

Formula generalize(const Formula& f, const Assignment& m, const std::set<Var>& keep, const VarOrder& order) {
  auto lits = implicant(f, m);
  std::vector<Polynomial> polys;
  std::vector<Formula> out;
  std::vector<Var> low, high;
  for (Var v : formula_vars(f)) (keep.count(v) ? low : high).push_back(v);
  order.sort(low);
  order.sort(high);
  low.insert(low.end(), high.begin(), high.end());
  for (auto& l : lits) {
    if (auto* b = std::get_if<BoolAtom>(&l.atom)) {
      if (keep.count(b->v)) out.push_back(to_formula(l));
    } else if (auto* p = std::get_if<PolyAtom>(&l.atom)) {
      polys.push_back(p->f);
    } else {
      polys.push_back(std::get<RootAtom>(l.atom).f);
    }
  }
  if (!polys.empty()) {
    auto cell = cell_basic(polys, m.reals(), VarOrder(low));
    for (auto& level : cell.levels) {
      if (!keep.count(level.x)) continue;
      for (auto& a : level.atoms) out.push_back(Formula::atom(a));
    }
  }
  return Formula::conjunction(std::move(out));
}

}  // namespace nra
