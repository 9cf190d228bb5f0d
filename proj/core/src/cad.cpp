#include "nra/cad.hpp"

#include <algorithm>
#include <unordered_set>

namespace nra {

const CellLevel* CellDescription::level(Var x) const {
  for (auto& l : levels)
    if (l.x == x) return &l;
  return nullptr;
}

std::vector<Atom> CellDescription::atoms() const {
  std::vector<Atom> out;
  for (auto& l : levels) out.insert(out.end(), l.atoms.begin(), l.atoms.end());
  return out;
}

Formula CellDescription::to_formula() const {
  std::vector<Formula> fs;
  for (auto& a : atoms()) fs.push_back(Formula::atom(a));
  return Formula::conjunction(std::move(fs));
}

std::vector<Polynomial> projection_factors(const Polynomial& f) { return simple_factors(f); }

Atom sign_condition(const Polynomial& f, const RealAssignment& m) {
  if (f.is_constant()) throw PolyError("sign_condition: constant polynomial");
  int s = sign_at(f, m);
  if (f.leading_integer() < 0) s = -s;
  Rel rel = s < 0 ? Rel::Lt : s > 0 ? Rel::Gt : Rel::Eq;
  return PolyAtom{primitive(f), rel};
}

namespace {

/// Polynomials bucketed by their top variable.
class Levels {
 public:
  explicit Levels(const VarOrder& order) : order_(order) {}

  void add(const Polynomial& f) {
    for (auto& q : projection_factors(f)) {
      if (!seen_.insert(q).second) continue;
      Var x = q.top_var(order_);
      by_rank_[order_.rank(x)].push_back(q);
      var_of_rank_[order_.rank(x)] = x;
    }
  }

  [[nodiscard]] bool empty() const { return by_rank_.empty(); }

  /// Removes and returns the polynomials of the highest remaining level.
  std::pair<Var, std::vector<Polynomial>> pop_top() {
    auto it = std::prev(by_rank_.end());
    Var x = var_of_rank_.at(it->first);
    auto ps = std::move(it->second);
    by_rank_.erase(it);
    return {x, std::move(ps)};
  }

  /// Adds p to the level currently being processed (top variable x).
  bool add_same_level(const Polynomial& f, Var x, std::vector<Polynomial>& level) {
    bool added = false;
    for (auto& q : projection_factors(f)) {
      if (q.top_var(order_) != x) {
        add(q);
        continue;
      }
      if (seen_.insert(q).second) {
        level.push_back(q);
        added = true;
      }
    }
    return added;
  }

 private:
  const VarOrder& order_;
  std::map<std::uint64_t, std::vector<Polynomial>> by_rank_;
  std::map<std::uint64_t, Var> var_of_rank_;
  std::unordered_set<Polynomial> seen_;
};

bool all_assigned(const Polynomial& f, const RealAssignment& m) {
  for (Var v : f.vars())
    if (!m.count(v)) return false;
  return true;
}

/// Projects the polynomials of one level into the lower ones. With a model,
/// coefficients are added from the top until one is non-zero at the model;
/// without one, until a non-zero constant.
void project_level(Var x, const std::vector<Polynomial>& ps, Levels& levels, const RealAssignment* m) {
  for (auto& p : ps) {
    auto cs = p.coefficients(x);
    for (std::size_t j = cs.size(); j-- > 0;) {
      if (cs[j].is_zero()) continue;
      if (cs[j].is_constant()) break;
      levels.add(cs[j]);
      if (m && all_assigned(cs[j], *m) && sign_at(cs[j], *m) != 0) break;
    }
    if (p.degree(x) >= 2) levels.add(discriminant(p, x));
  }
  for (std::size_t i = 0; i < ps.size(); ++i)
    for (std::size_t j = i + 1; j < ps.size(); ++j) levels.add(resultant(ps[i], ps[j], x));
}

void add_derivatives(const Polynomial& p, Var x, Levels& levels, std::vector<Polynomial>& level) {
  unsigned d = p.degree(x);
  for (unsigned i = 1; i < d; ++i) levels.add_same_level(derivative(p, x, i), x, level);
}

struct Bound {
  Polynomial p;
  unsigned k;
  AlgebraicNumber r;
};

}  // namespace

std::vector<Polynomial> project(const std::vector<Polynomial>& F, const VarOrder& order, bool with_derivatives) {
  Levels levels(order);
  for (auto& f : F) levels.add(f);
  std::vector<Polynomial> out;
  while (!levels.empty()) {
    auto [x, ps] = levels.pop_top();
    if (with_derivatives)
      for (std::size_t i = 0; i < ps.size(); ++i) add_derivatives(Polynomial(ps[i]), x, levels, ps);
    project_level(x, ps, levels, nullptr);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

CellDescription construct_cell(const std::vector<Polynomial>& F, const RealAssignment& m, const VarOrder& order,
                               const CellOptions& options) {
  Levels levels(order);
  for (auto& f : F) levels.add(f);
  std::vector<CellLevel> top_down;
  while (!levels.empty()) {
    auto [x, ps] = levels.pop_top();
    if (options.project_only && *options.project_only == x) {
      project_level(x, ps, levels, &m);
      continue;
    }
    auto vit = m.find(x);
    if (vit == m.end()) throw PolyError("cell: incomplete assignment");
    const AlgebraicNumber& v = vit->second;

    std::optional<Bound> lower, upper, section;
    std::vector<Polynomial> nullified;
    for (auto& p : ps) {
      auto rr = roots_at(p, x, m);
      if (rr.nullified) {
        nullified.push_back(p);
        continue;
      }
      for (unsigned k = 0; k < rr.roots.size(); ++k) {
        const auto& r = rr.roots[k];
        int c = compare(r, v);
        if (c == 0) {
          if (!section || p.degree(x) < section->p.degree(x)) section = Bound{p, k + 1, r};
        } else if (c < 0) {
          int d = lower ? compare(r, lower->r) : 1;
          if (d > 0 || (d == 0 && p.degree(x) < lower->p.degree(x))) lower = Bound{p, k + 1, r};
        } else {
          int d = upper ? compare(r, upper->r) : -1;
          if (d < 0 || (d == 0 && p.degree(x) < upper->p.degree(x))) upper = Bound{p, k + 1, r};
        }
      }
    }

    std::vector<const Bound*> bounds;
    if (section) {
      bounds.push_back(&*section);
    } else {
      if (lower) bounds.push_back(&*lower);
      if (upper) bounds.push_back(&*upper);
    }

    CellLevel level{x, {}};
    auto push_atom = [&level](Atom a) {
      if (std::find(level.atoms.begin(), level.atoms.end(), a) == level.atoms.end()) level.atoms.push_back(std::move(a));
    };
    if (!options.basic) {
      if (section) {
        push_atom(RootAtom{x, Rel::Eq, section->p, section->k});
      } else {
        if (lower) push_atom(RootAtom{x, Rel::Gt, lower->p, lower->k});
        if (upper) push_atom(RootAtom{x, Rel::Lt, upper->p, upper->k});
      }
    } else {
      for (auto* b : bounds) {
        unsigned d = b->p.degree(x);
        for (unsigned i = 0; i < d; ++i) push_atom(sign_condition(derivative(b->p, x, i), m));
      }
      for (auto& p : nullified) push_atom(PolyAtom{p, Rel::Eq});
      // Derivatives must stay delineable below for the sign conditions to
      // carve a cell.
      for (auto* b : bounds) add_derivatives(b->p, x, levels, ps);
    }
    project_level(x, ps, levels, &m);
    top_down.push_back(std::move(level));
  }
  CellDescription cell;
  cell.levels.assign(top_down.rbegin(), top_down.rend());
  return cell;
}

CellDescription cell_extended(const std::vector<Polynomial>& F, const RealAssignment& m, const VarOrder& order) {
  return construct_cell(F, m, order, {});
}

CellDescription cell_basic(const std::vector<Polynomial>& F, const RealAssignment& m, const VarOrder& order) {
  CellOptions o;
  o.basic = true;
  return construct_cell(F, m, order, o);
}

}  // namespace nra
