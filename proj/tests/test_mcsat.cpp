#include <gtest/gtest.h>

#include <random>

#include "nra/mcsat.hpp"
#include "sampling.hpp"

using namespace nra;

namespace {

const Var X = 0, Y = 1, B = 10;
Polynomial x = Polynomial::variable(X), y = Polynomial::variable(Y);
VarOrder order({X, Y});

Formula lt(const Polynomial& f, const Polynomial& g) { return Formula::constraint(f - g, Rel::Lt); }
Formula gt(const Polynomial& f, const Polynomial& g) { return Formula::constraint(f - g, Rel::Gt); }
Formula b = Formula::boolean(B);

Assignment model_x(Rational v) {
  Assignment m;
  m.set(X, AlgebraicNumber(v));
  return m;
}

Atom circle(long r2) { return PolyAtom{x * x + y * y - r2, Rel::Lt}; }

bool has_literal(const Clause& c, const Atom& a, bool positive) {
  return std::find(c.begin(), c.end(), Literal{a, positive}) != c.end();
}

}  // namespace

TEST(IntervalSet, Basics) {
  auto s = IntervalSet::below(AlgebraicNumber(1), false).intersect(IntervalSet::above(AlgebraicNumber(-1), true));
  EXPECT_TRUE(s.contains(AlgebraicNumber(-1)));
  EXPECT_FALSE(s.contains(AlgebraicNumber(1)));
  EXPECT_EQ(s.pick(), AlgebraicNumber(0));
  auto c = s.complement();
  EXPECT_EQ(c.pieces().size(), 2u);
  EXPECT_TRUE(c.contains(AlgebraicNumber(1)));
  EXPECT_TRUE(c.intersect(s).empty());
  EXPECT_TRUE(IntervalSet::point(AlgebraicNumber(3)).intersect(IntervalSet::below(AlgebraicNumber(3), false)).empty());
  auto sqrt2 = isolate_real_roots(x * x - 2, X)[1];
  auto t = IntervalSet::above(sqrt2, false);
  EXPECT_EQ(t.pick(), AlgebraicNumber(2));
  auto narrow = IntervalSet::above(AlgebraicNumber(Rational(1, 3)), false)
                    .intersect(IntervalSet::below(AlgebraicNumber(Rational(1, 2)), false));
  auto p = narrow.pick();
  EXPECT_TRUE(p.is_rational());
  EXPECT_TRUE(narrow.contains(p));
}

TEST(Mcsat, EmptyAssertions) {
  Solver s(order);
  auto r = s.check();
  EXPECT_EQ(r.status, Status::Sat);
  EXPECT_TRUE(r.model.empty());
}

TEST(Mcsat, AssertFalse) {
  Solver s(order);
  s.assert_formula(Formula::bottom());
  auto r = s.check();
  EXPECT_EQ(r.status, Status::Unsat);
  EXPECT_TRUE(r.interpolant.empty());
}

TEST(Mcsat, SimpleUnsat) {
  Solver s(order);
  s.assert_formula(lt(x, 0));
  s.assert_formula(gt(x, 1));
  EXPECT_EQ(s.check().status, Status::Unsat);
  Solver t(order);
  t.assert_formula(lt(x * x, 0));
  EXPECT_EQ(t.check().status, Status::Unsat);
}

TEST(Mcsat, SimpleSat) {
  Solver s(order);
  s.assert_formula(gt(x * x, 2));
  s.assert_formula(lt(x * y, 1) || b);
  s.assert_formula(gt(y, x));
  auto r = s.check();
  ASSERT_EQ(r.status, Status::Sat);
  for (auto& f : s.assertions()) EXPECT_EQ(evaluate(f, r.model), Tri::True);
}

TEST(Mcsat, BoolCircleModel) {
  Solver s(order);
  s.assert_formula(b);
  s.assert_formula(!b || lt(x * x + y * y, 2));
  auto r = s.check_modulo(model_x(2));
  ASSERT_EQ(r.status, Status::Unsat);
  Clause expected{Literal{RootAtom{X, Rel::Gt, x * x - 2, 2}, false}};
  EXPECT_EQ(r.interpolant, expected);

  auto sat = s.check_modulo(model_x(0));
  ASSERT_EQ(sat.status, Status::Sat);
  EXPECT_EQ(sat.model.reals().at(X), AlgebraicNumber(0));
  EXPECT_EQ(evaluate(lt(x * x + y * y, 2), sat.model), Tri::True);
}

TEST(Mcsat, BoolCircleSteps) {
  Solver s(order);
  s.assert_formula(b);
  s.assert_formula(!b || lt(x * x + y * y, 2));
  s.start(model_x(2));
  EXPECT_FALSE(s.propagate());
  EXPECT_TRUE(s.can_evaluate(circle(2), true));
  EXPECT_EQ(s.stage_var(), X);
  EXPECT_FALSE(s.decide(X, AlgebraicNumber(2), true));
  auto conflict = s.propagate();
  ASSERT_TRUE(conflict);
  EXPECT_TRUE(has_literal(*conflict, circle(2), false));
  EXPECT_TRUE(has_literal(*conflict, RootAtom{X, Rel::Gt, x * x - 2, 2}, false));
  EXPECT_EQ(conflict->size(), 2u);
  auto [c, final] = s.analyze_conflict(*conflict);
  EXPECT_TRUE(final);
  EXPECT_EQ(c.size(), 2u);
  auto i = s.analyze_final(c);
  EXPECT_EQ(i, (Clause{Literal{RootAtom{X, Rel::Gt, x * x - 2, 2}, false}}));
}

TEST(Mcsat, TrailsAndExplanations) {
  Atom c = PolyAtom{x * x + y * y - 1, Rel::Lt};
  {
    Solver s(order);
    s.start();
    s.decide(c, true);
    EXPECT_FALSE(s.decide(X, AlgebraicNumber(0)));
    EXPECT_FALSE(s.propagate());
    EXPECT_TRUE(s.feasible_set().contains(AlgebraicNumber(0)));
  }
  {
    Solver s(order);
    s.start();
    s.decide(c, true);
    EXPECT_FALSE(s.decide(X, AlgebraicNumber(1)));
    EXPECT_TRUE(s.feasible_set().empty());
    auto e = s.explain_unit_conflict();
    ASSERT_TRUE(e);
    EXPECT_TRUE(has_literal(*e, c, false));
    for (auto& l : *e) EXPECT_TRUE(s.can_evaluate(l.atom, !l.positive));
    // Valid: no point satisfies the negation of the explanation.
    std::mt19937 rng(3);
    for (int k = 0; k < 300; ++k) {
      Assignment m;
      m.set(X, AlgebraicNumber(sampling::random_between(rng, -2, 2)));
      m.set(Y, AlgebraicNumber(sampling::random_between(rng, -2, 2)));
      if (k == 0) m.set(X, AlgebraicNumber(1));
      EXPECT_NE(evaluate(to_formula(*e), m), Tri::False);
    }
  }
  {
    Solver s(order);
    s.start();
    s.decide(c, true);
    s.decide(X, AlgebraicNumber(1));
    auto conflict = s.decide(Y, AlgebraicNumber(0));
    ASSERT_TRUE(conflict);
    EXPECT_EQ(*conflict, (Clause{Literal{c, true}, Literal{c, false}}));
    EXPECT_TRUE(s.can_evaluate(c, true));
    EXPECT_TRUE(s.can_evaluate(c, false));
  }
}

TEST(Mcsat, CanEvaluateTrivial) {
  Solver s(order);
  s.start();
  EXPECT_FALSE(s.can_evaluate(circle(1), true));
  EXPECT_FALSE(s.can_evaluate(circle(1), false));
  s.decide(BoolAtom{B}, true);
  EXPECT_TRUE(s.can_evaluate(BoolAtom{B}, true));
  EXPECT_FALSE(s.can_evaluate(BoolAtom{B}, false));
}

TEST(Mcsat, SatModuloKeepsModel) {
  Solver s(order);
  s.assert_formula(lt(x * x + y * y, 1));
  auto r = s.check_modulo(model_x(0));
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_EQ(r.model.reals().at(X), AlgebraicNumber(0));
  auto u = s.check_modulo(model_x(1));
  ASSERT_EQ(u.status, Status::Unsat);
  EXPECT_EQ(evaluate(to_formula(u.interpolant), model_x(1)), Tri::False);
  for (auto& l : u.interpolant)
    for (Var v : atom_vars(l.atom)) EXPECT_EQ(v, X);
}

TEST(Mcsat, BoolModel) {
  Solver s(order);
  s.assert_formula(!b || gt(x, 3));
  s.assert_formula(b || lt(x, -3));
  Assignment m;
  m.set(B, true);
  auto r = s.check_modulo(m);
  ASSERT_EQ(r.status, Status::Sat);
  EXPECT_EQ(compare(r.model.reals().at(X), AlgebraicNumber(3)), 1);
  m.set(X, AlgebraicNumber(0));
  auto u = s.check_modulo(m);
  ASSERT_EQ(u.status, Status::Unsat);
  EXPECT_EQ(evaluate(to_formula(u.interpolant), m), Tri::False);
}

TEST(Mcsat, ConflictLimit) {
  Solver s(order);
  s.assert_formula(lt(x * x + y * y, 1));
  s.assert_formula(gt(x * y, 1));
  SolverLimits lim;
  lim.max_conflicts = 1;
  s.set_limits(lim);
  auto r = s.check();
  EXPECT_NE(r.status, Status::Sat);
}

// Random small problems, decided against dense sampling.
TEST(Mcsat, RandomAgainstSampling) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> coef(-3, 3), rel(0, 4), deg(0, 2);
  int sat = 0, unsat = 0;
  for (int iter = 0; iter < 150; ++iter) {
    std::vector<Formula> fs;
    for (int i = 0; i < 3; ++i) {
      Polynomial p = coef(rng);
      for (int j = 0; j < 3; ++j)
        p += Polynomial(coef(rng)) * x.pow(deg(rng)) * y.pow(deg(rng));
      Formula f = Formula::constraint(p, static_cast<Rel>(rel(rng)));
      if (i == 2) f = f || Formula::constraint(x - coef(rng), Rel::Lt);
      fs.push_back(f);
    }
    Solver s(order);
    for (auto& f : fs) s.assert_formula(f);
    auto r = s.check();
    ASSERT_NE(r.status, Status::Unknown);
    if (r.status == Status::Sat) {
      ++sat;
      continue;
    }
    ++unsat;
    for (int k = 0; k < 400; ++k) {
      Assignment m;
      m.set(X, AlgebraicNumber(sampling::random_between(rng, -4, 4)));
      m.set(Y, AlgebraicNumber(sampling::random_between(rng, -4, 4)));
      bool all = true;
      for (auto& f : fs) all = all && evaluate(f, m) == Tri::True;
      EXPECT_FALSE(all);
    }
  }
  EXPECT_GT(sat, 0);
  EXPECT_GT(unsat, 0);
}

// Interpolants modulo a model: false under the model, over its variables
// only, and implied by the assertions.
TEST(Mcsat, RandomInterpolants) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> coef(-3, 3), rel(0, 4), deg(0, 2), val(-3, 3);
  int unsat = 0;
  for (int iter = 0; iter < 120; ++iter) {
    std::vector<Formula> fs;
    for (int i = 0; i < 2; ++i) {
      Polynomial p = coef(rng);
      for (int j = 0; j < 3; ++j) p += Polynomial(coef(rng)) * x.pow(deg(rng)) * y.pow(deg(rng));
      Formula f = Formula::constraint(p, static_cast<Rel>(rel(rng)));
      fs.push_back(i == 0 ? f : f || b);
    }
    fs.push_back(!b || Formula::constraint(x * x + y * y - 4, Rel::Lt));
    Solver s(order);
    for (auto& f : fs) s.assert_formula(f);
    Assignment m0 = model_x(Rational(val(rng), 2));
    auto r = s.check_modulo(m0);
    ASSERT_NE(r.status, Status::Unknown);
    if (r.status == Status::Sat) {
      EXPECT_EQ(r.model.reals().at(X), m0.reals().at(X));
      continue;
    }
    ++unsat;
    EXPECT_EQ(evaluate(to_formula(r.interpolant), m0), Tri::False);
    for (auto& l : r.interpolant)
      for (Var v : atom_vars(l.atom)) EXPECT_EQ(v, X);
    for (int k = 0; k < 200; ++k) {
      Assignment m;
      m.set(X, AlgebraicNumber(sampling::random_between(rng, -4, 4)));
      m.set(Y, AlgebraicNumber(sampling::random_between(rng, -4, 4)));
      m.set(B, k % 2 == 0);
      bool all = true;
      for (auto& f : fs) all = all && evaluate(f, m) == Tri::True;
      if (all) EXPECT_EQ(evaluate(to_formula(r.interpolant), m), Tri::True) << to_smtlib(to_formula(r.interpolant));
    }
  }
  EXPECT_GT(unsat, 0);
}
