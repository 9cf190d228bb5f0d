#include <gtest/gtest.h>

#include <random>

#include "nra/poly.hpp"

using namespace nra;

namespace {

const Var X = 0, Y = 1, Z = 2;
Polynomial x = Polynomial::variable(X), y = Polynomial::variable(Y), z = Polynomial::variable(Z);

Polynomial random_poly(std::mt19937& rng, int vars, int terms, int maxdeg) {
  std::uniform_int_distribution<int> coef(-5, 5), deg(0, maxdeg), var(0, vars - 1);
  Polynomial p;
  for (int i = 0; i < terms; ++i) {
    Polynomial t = coef(rng);
    for (int j = 0; j < 2; ++j) t *= Polynomial::variable(var(rng)).pow(deg(rng));
    p += t;
  }
  return p;
}

}  // namespace

TEST(Poly, CanonicalForm) {
  EXPECT_EQ(x * y, y * x);
  EXPECT_EQ((x + y) * (x - y), x * x - y * y);
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_EQ((x + 1).pow(2), x * x + x * 2 + 1);
  EXPECT_EQ((x * x * y + 3).degree(X), 2u);
  EXPECT_EQ((x * x * y + 3).total_degree(), 3u);
}

TEST(Poly, Coefficients) {
  Polynomial f = x * x * y + x * 3 - y + 2;
  auto cs = f.coefficients(X);
  ASSERT_EQ(cs.size(), 3u);
  EXPECT_EQ(cs[0], 2 - y);
  EXPECT_EQ(cs[1], Polynomial(3));
  EXPECT_EQ(cs[2], y);
  EXPECT_EQ(Polynomial::from_coefficients(X, cs), f);
  EXPECT_EQ(f.leading_coefficient(X), y);
}

TEST(Poly, Derivative) {
  EXPECT_EQ(derivative(x.pow(3) * y, X), x * x * y * 3);
  EXPECT_EQ(derivative(x.pow(3), X, 2), x * 6);
  EXPECT_TRUE(derivative(y, X).is_zero());
}

TEST(Poly, Resultant) {
  EXPECT_EQ(resultant(x * x - 2, x - y, X), y * y - 2);
  EXPECT_EQ(resultant(x - 1, x + 1, X), Polynomial(2));
  EXPECT_TRUE(resultant(x * x, x, X).is_zero());
  EXPECT_THROW(resultant(Polynomial(3), x, X), PolyError);
}

TEST(Poly, Discriminant) {
  EXPECT_EQ(discriminant(x * x - 2, X), Polynomial(8));
  EXPECT_EQ(discriminant(x * x + y * y - 2, X), (y * y - 2) * -4);
  // b^2 - 4ac
  EXPECT_EQ(discriminant(x * x * 2 + x * 3 + 1, X), Polynomial(1));
}

TEST(Poly, ResultantVanishesOnCommonRoot) {
  // Res_x(f, g) at y = 1 is zero when f(., 1) and g(., 1) share a root.
  Polynomial f = (x - y) * (x + 2), g = (x - 1) * (x + y + 5);
  Polynomial r = resultant(f, g, X);
  EXPECT_EQ(evaluate(r, {{Y, 1}}), 0);
  EXPECT_NE(evaluate(r, {{Y, 3}}), 0);
}

TEST(Poly, ResultantMatchesEvaluationProperty) {
  // res commutes with specialization when leading coefficients stay non-zero.
  std::mt19937 rng(7);
  for (int it = 0; it < 40; ++it) {
    Polynomial f = random_poly(rng, 2, 4, 2) + x.pow(3);
    Polynomial g = random_poly(rng, 2, 3, 2) + x.pow(2) * 2;
    if (f.degree(X) != 3 || g.degree(X) < 2) continue;
    Polynomial r = resultant(f, g, X);
    for (int v = -2; v <= 2; ++v) {
      Polynomial fv = substitute(f, {{Y, v}}), gv = substitute(g, {{Y, v}});
      if (fv.leading_coefficient(X) != f.leading_coefficient(X) || fv.degree(X) != f.degree(X) ||
          gv.degree(X) != g.degree(X))
        continue;
      Polynomial rv = resultant(fv, gv, X);
      // substitute scales by a positive factor only when denominators appear; integer points are exact.
      EXPECT_EQ(evaluate(r, {{Y, v}}), evaluate(rv, {})) << f << " | " << g << " at " << v;
    }
  }
}

TEST(Poly, ExactDivide) {
  Polynomial a = (x + y) * (x * x - y + 3);
  EXPECT_EQ(exact_divide(a, x + y), x * x - y + 3);
  EXPECT_THROW(exact_divide(x * x + 1, x + 1), PolyError);
}

TEST(Poly, PrimitiveAndFactors) {
  EXPECT_EQ(primitive(x * -4 + 6), x * 2 - 3);
  auto fs = simple_factors(x * x * y * 6 + x * y * 4);
  // factors: x, y, 3x + 2
  EXPECT_EQ(fs.size(), 3u);
}

TEST(Poly, Substitute) {
  EXPECT_EQ(substitute(x * y + 1, X, y + 1), y * y + y + 1);
  EXPECT_EQ(evaluate(x * x - 2, {{X, Rational(3, 2)}}), Rational(1, 4));
  Polynomial s = substitute(x * y - 1, {{X, Rational(1, 2)}});
  // positive multiple of y/2 - 1
  EXPECT_EQ(primitive(s), y - 2);
}

TEST(Poly, Printing) {
  auto name = [](Var v) { return std::string(1, "xyz"[v]); };
  EXPECT_EQ(to_smtlib(x * x - 2, name), "(- (* x x) 2)");
  auto [lhs, rhs] = to_smtlib_sides(x * x - 2, name);
  EXPECT_EQ(lhs, "(* x x)");
  EXPECT_EQ(rhs, "2");
}

TEST(Poly, VarOrder) {
  VarOrder o({Z, X});
  EXPECT_TRUE(o.less(Z, X));
  EXPECT_TRUE(o.less(X, Y));
  EXPECT_EQ((x * z + y).top_var(o), Y);
  EXPECT_EQ((x * z).top_var(o), X);
}

TEST(Poly, DeadlineInterruptsArithmetic) {
  using namespace std::chrono;
  auto past = steady_clock::now() - seconds(1);
  auto work = [] {
    Polynomial p = x + y + 1;
    for (int i = 0; i < 300; ++i) p = p * (x - 1) - p;
    return p;
  };
  {
    DeadlineScope scope(past);
    EXPECT_THROW(work(), Interrupted);
  }
  EXPECT_NO_THROW(work());
  // The earlier deadline wins when scopes nest.
  DeadlineScope outer(past);
  DeadlineScope inner(steady_clock::now() + hours(1));
  EXPECT_THROW(work(), Interrupted);
}
