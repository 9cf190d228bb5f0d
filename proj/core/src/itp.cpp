#include "nra/itp.hpp"

#include <algorithm>
#include <stdexcept>

namespace nra {

std::set<Var> shared_vars(const Formula& a, const Formula& b) {
  auto va = formula_vars(a), vb = formula_vars(b);
  std::set<Var> out;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::inserter(out, out.end()));
  return out;
}

VarOrder interpolation_order(const Formula& a, const Formula& b) {
  auto va = formula_vars(a), vb = formula_vars(b);
  std::vector<Var> shared, a_local, b_local;
  for (Var v : va) (vb.count(v) ? shared : a_local).push_back(v);
  for (Var v : vb)
    if (!va.count(v)) b_local.push_back(v);
  shared.insert(shared.end(), a_local.begin(), a_local.end());
  shared.insert(shared.end(), b_local.begin(), b_local.end());
  return VarOrder(shared);
}

Clause eliminate_extended(const Clause& clause, const Assignment& m, const VarOrder& order) {
  Clause out;
  auto push = [&out](Literal l) {
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
  };
  for (auto& l : clause) {
    if (evaluate(l, m) != Tri::False) throw std::invalid_argument("eliminate_extended: literal not false in model");
    auto* r = std::get_if<RootAtom>(&l.atom);
    if (!r) {
      push(l);
      continue;
    }
    auto cell = cell_basic({r->f}, m.reals(), order);
    for (auto& a : cell.atoms()) push(Literal{a, false});
  }
  return out;
}

namespace {

void run(Solver& sa, Solver& sb, const std::set<Var>& shared, const VarOrder& order,
         const InterpolationOptions& options, InterpolationResult& res) {
  while (res.iterations < options.max_iterations) {
    ++res.iterations;
    auto rb = sb.check();
    if (rb.status == Status::Unknown) return;
    if (rb.status == Status::Unsat) {
      res.status = Status::Unsat;
      return;
    }
    Assignment mb = rb.model.restricted(shared);
    auto ra = sa.check_modulo(mb);
    if (ra.status == Status::Unknown) return;
    if (ra.status == Status::Sat) {
      res.status = Status::Sat;
      auto both = Assignment::combine(ra.model, rb.model);
      if (!both) throw std::logic_error("interpolate: models disagree on shared variables");
      res.model = *both;
      return;
    }
    Clause c = options.basic ? eliminate_extended(ra.interpolant, mb, order) : ra.interpolant;
    res.log.push_back({mb, c});
    if (std::find(res.interpolant.begin(), res.interpolant.end(), c) == res.interpolant.end())
      res.interpolant.push_back(c);
    sb.assert_formula(to_formula(c));
  }
}

}  // namespace

InterpolationResult interpolate(const Formula& a, const Formula& b, const InterpolationOptions& options) {
  VarOrder order = interpolation_order(a, b);
  std::set<Var> shared = shared_vars(a, b);
  Solver sa(order), sb(order);
  sa.set_limits(options.limits);
  sb.set_limits(options.limits);
  sa.assert_formula(a);
  sb.assert_formula(b);

  InterpolationResult res;
  try {
    DeadlineScope scope(options.limits.deadline);
    run(sa, sb, shared, order, options, res);
  } catch (const Interrupted&) {
    res.status = Status::Unknown;
    res.interpolant.clear();
  }
  return res;
}

}  // namespace nra
