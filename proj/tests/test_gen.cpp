#include <gtest/gtest.h>

#include <random>

#include "nra/gen.hpp"
#include "nra/mcsat.hpp"
#include "sampling.hpp"

using namespace nra;

namespace {

const Var X = 0, Y = 1, A = 10, B = 11;
Polynomial x = Polynomial::variable(X), y = Polynomial::variable(Y);
Formula c(const Polynomial& f, Rel r) { return Formula::constraint(f, r); }

Assignment at(Rational a, Rational b) {
  Assignment m;
  m.set(X, AlgebraicNumber(a));
  m.set(Y, AlgebraicNumber(b));
  return m;
}

// Every sampled point of g extends to a model of f.
void check_extends(const Formula& f, const Formula& g, const Assignment& origin, int samples) {
  std::mt19937 rng(11);
  int hits = 0;
  for (int k = 0; k < 20 * samples && hits < samples; ++k) {
    Assignment m;
    m.set(X, k == 0 ? origin.reals().at(X) : AlgebraicNumber(sampling::random_between(rng, -3, 3)));
    if (evaluate(g, m) != Tri::True) continue;
    ++hits;
    Solver s(VarOrder({X, Y}));
    s.assert_formula(f);
    EXPECT_EQ(s.check_modulo(m).status, Status::Sat) << m.reals().at(X).to_decimal(4);
  }
  EXPECT_GT(hits, 0);
}

}  // namespace

TEST(Gen, Implicant) {
  Formula a = Formula::boolean(A), b = Formula::boolean(B);
  Assignment m;
  m.set(A, true);
  m.set(B, false);
  EXPECT_EQ(implicant(a || b, m), (std::vector<Literal>{{BoolAtom{A}, true}}));
  EXPECT_EQ(implicant(!b, m), (std::vector<Literal>{{BoolAtom{B}, false}}));
  EXPECT_THROW(implicant(b, m), std::invalid_argument);

  Formula f = c(x, Rel::Gt) && (c(y, Rel::Gt) || c(y - 1, Rel::Lt));
  auto imp = implicant(f, at(1, 0));
  std::vector<Literal> expected{{PolyAtom{x, Rel::Gt}, true}, {PolyAtom{y - 1, Rel::Lt}, true}};
  EXPECT_EQ(imp, expected);
  EXPECT_EQ(implicant(c(x, Rel::Gt), at(1, 0)), (std::vector<Literal>{{PolyAtom{x, Rel::Gt}, true}}));
}

TEST(Gen, ImplicantImplies) {
  std::mt19937 rng(4);
  Formula f = (c(x * x + y * y - 2, Rel::Lt) || !(c(x - y, Rel::Gt) && c(x, Rel::Lt))) && c(x * y - 3, Rel::Lt);
  for (int k = 0; k < 200; ++k) {
    Assignment m = at(sampling::random_between(rng, -3, 3), sampling::random_between(rng, -3, 3));
    if (evaluate(f, m) != Tri::True) continue;
    std::vector<Formula> lits;
    for (auto& l : implicant(f, m)) lits.push_back(to_formula(l));
    Formula imp = Formula::conjunction(lits);
    EXPECT_EQ(evaluate(imp, m), Tri::True);
    for (int j = 0; j < 50; ++j) {
      Assignment p = at(sampling::random_between(rng, -3, 3), sampling::random_between(rng, -3, 3));
      if (evaluate(imp, p) == Tri::True) EXPECT_EQ(evaluate(f, p), Tri::True);
    }
  }
}

TEST(Gen, CircleOntoX) {
  Formula f = c(x * x + y * y - 2, Rel::Gt);
  Formula g = generalize(f, at(1, 2), {X});
  Formula expected = c(x * x - 2, Rel::Lt) && c(x, Rel::Gt);
  EXPECT_EQ(g, expected) << to_smtlib(g);
  check_extends(f, g, at(1, 2), 100);
}

TEST(Gen, KeepAll) {
  Formula f = c(x * x + y * y - 2, Rel::Gt);
  Formula g = generalize(f, at(1, 2), {X, Y});
  EXPECT_EQ(evaluate(g, at(1, 2)), Tri::True);
  EXPECT_EQ(formula_vars(g), (std::set<Var>{X, Y}));
}

TEST(Gen, LinearProjection) {
  Formula f = c(y - x, Rel::Gt);
  Formula g = generalize(f, at(0, 1), {X});
  EXPECT_EQ(evaluate(g, at(0, 1)), Tri::True);
  for (Var v : formula_vars(g)) EXPECT_EQ(v, X);
  check_extends(f, g, at(0, 1), 100);
}

TEST(Gen, RandomSoundness) {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> coef(-3, 3), rel(0, 4), deg(0, 2);
  for (int iter = 0; iter < 25; ++iter) {
    Polynomial p = coef(rng), q = coef(rng);
    for (int j = 0; j < 3; ++j) {
      p += Polynomial(coef(rng)) * x.pow(deg(rng)) * y.pow(deg(rng));
      q += Polynomial(coef(rng)) * x.pow(deg(rng)) * y.pow(deg(rng));
    }
    Formula f = c(p, static_cast<Rel>(rel(rng))) && (c(q, static_cast<Rel>(rel(rng))) || c(y, Rel::Gt));
    Solver s(VarOrder({X, Y}));
    s.assert_formula(f);
    auto r = s.check();
    if (r.status != Status::Sat) continue;
    Assignment m = r.model;
    m.set(X, m.reals().count(X) ? m.reals().at(X) : AlgebraicNumber(0));
    m.set(Y, m.reals().count(Y) ? m.reals().at(Y) : AlgebraicNumber(0));
    Formula g = generalize(f, m, {X});
    EXPECT_EQ(evaluate(g, m), Tri::True);
    check_extends(f, g, m, 20);
  }
}
