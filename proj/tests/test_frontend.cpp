#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "nra/frontend.hpp"

using namespace nra;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kInputs = NRA_INPUTS_DIR;

ProblemScript declare_xy() {
  return parse_script("(declare-const x Real)(declare-const y Real)(declare-const b Bool)(declare-const c Bool)");
}

}  // namespace

TEST(Frontend, ParseScript) {
  auto s = parse_script("(declare-const x Real)(assert (< (* x x) 2))(check-sat)");
  ASSERT_EQ(s.assertions.size(), 1u);
  ASSERT_EQ(s.commands.size(), 1u);
  EXPECT_EQ(s.commands[0].kind, ScriptCommand::Kind::CheckSat);
  Polynomial x = Polynomial::variable(0);
  EXPECT_EQ(s.assertions[0].second, Formula::constraint(x * x - 2, Rel::Lt));
}

TEST(Frontend, ParseBoolCircle) {
  auto s = parse_script(slurp(kInputs + "/scripts/bool_circle.nlsmt"));
  ASSERT_EQ(s.assertions.size(), 2u);
  ASSERT_GE(s.commands.size(), 1u);
  auto& c = s.commands[0];
  EXPECT_EQ(c.kind, ScriptCommand::Kind::CheckSatAssumingModel);
  EXPECT_EQ(c.model.reals().at(*s.vars.lookup("x")), AlgebraicNumber(2));
}

TEST(Frontend, RunBoolCircle) {
  auto s = parse_script(slurp(kInputs + "/scripts/bool_circle.nlsmt"));
  std::ostringstream out;
  run_script(s, out);
  std::istringstream lines(out.str());
  std::string l1, l2, l3;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  EXPECT_EQ(l1, "unsat");
  EXPECT_EQ(l2, "(or (not (> (* x x) 2)) (not (> x 0)))");
  EXPECT_EQ(l3, "sat");
}

TEST(Frontend, Rationals) {
  auto s = declare_xy();
  Polynomial x = Polynomial::variable(0), y = Polynomial::variable(1);
  EXPECT_EQ(parse_formula("(< (* (/ 1 2) x) 1.5)", s.vars), Formula::constraint(x - 3, Rel::Lt));
  EXPECT_EQ(parse_formula("(>= (- x) (/ y 3))", s.vars), Formula::constraint(-3 * x - y, Rel::Ge));
  EXPECT_EQ(parse_formula("(= x -1/4)", s.vars), Formula::constraint(4 * x + 1, Rel::Eq));
  EXPECT_EQ(parse_formula("(< 0 x 1)", s.vars),
            Formula::constraint(x, Rel::Gt) && Formula::constraint(x - 1, Rel::Lt));
}

TEST(Frontend, Errors) {
  try {
    parse_script("(declare-const x Real)\n(assert (< x true))");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 14u);
  }
  EXPECT_THROW(parse_script("(assert (< y 1))"), ParseError);
  EXPECT_THROW(parse_script("(declare-const x Real)(assert (+ x 1))"), ParseError);
  EXPECT_THROW(parse_script("(declare-const x Real)(assert (< x 1)"), ParseError);
  EXPECT_THROW(parse_script("(declare-const x Int)"), ParseError);
  EXPECT_THROW(parse_script("(declare-const x Real)(declare-const x Real)"), ParseError);
  EXPECT_THROW(parse_script("(compute-interpolant)(compute-interpolant)"), ParseError);
  EXPECT_THROW(parse_script("(frobnicate)"), ParseError);
  EXPECT_THROW(parse_script("(declare-const x Real)(assert (< x (/ 1 x)))"), ParseError);
}

TEST(Frontend, ParseSystems) {
  auto cs = parse_system(slurp(kInputs + "/systems/cauchy.nlts"));
  EXPECT_EQ(cs.state.size(), 5u);
  Var s1 = *cs.vars.lookup("S1"), x = *cs.vars.lookup("x"), y = *cs.vars.lookup("y");
  Polynomial S1 = Polynomial::variable(s1), S1p = Polynomial::variable(cs.primed(s1));
  Polynomial px = Polynomial::variable(x), py = Polynomial::variable(y);
  auto conj = cs.trans.children();
  ASSERT_EQ(conj.size(), 3u);
  EXPECT_EQ(conj[0], Formula::constraint(S1p - S1 - px * py, Rel::Eq));

  auto counter = parse_system("(define-system :state ((x Real)) :init (= x 0) :trans (= x' (+ x 1)) :prop (< (* x x) 4))");
  EXPECT_EQ(counter.state.size(), 1u);
  EXPECT_EQ(counter.vars.name(counter.next[0]), "x'");

  EXPECT_THROW(parse_system("(define-system :state ((x Real)) :init (= x 0) :trans (= z' x) :prop (< x 4))"),
               ParseError);
  EXPECT_THROW(parse_system("(define-system :state ((x Real)) :init (= x' 0) :trans (= x' x) :prop (< x 4))"),
               ParseError);
  EXPECT_THROW(parse_system("(define-system :state ((x Real)) :init (= x 0) :prop (< x 4))"), ParseError);
}

TEST(Frontend, AllBundledInputsParse) {
  for (const char* f : {"counter", "cauchy", "cauchy_strong", "squaring", "rotation", "halving", "quadratic_map",
                        "doubling", "toggle", "fibonacci_product", "parabola", "sum_of_squares", "cubic_escape"}) {
    auto sys = parse_system(slurp(kInputs + "/systems/" + f + ".nlts"));
    auto again = parse_system(print_system(sys));
    EXPECT_EQ(again.init, sys.init) << f;
    EXPECT_EQ(again.trans, sys.trans) << f;
    EXPECT_EQ(again.prop, sys.prop) << f;
  }
  for (const char* f : {"bool_circle", "circle_interpolant", "parabola_line", "sqrt2", "unsat_square"})
    EXPECT_NO_THROW(parse_script(slurp(kInputs + "/scripts/" + f + ".nlsmt"))) << f;
}

TEST(Frontend, PrintValues) {
  auto s = declare_xy();
  Polynomial x = Polynomial::variable(0);
  EXPECT_EQ(print_term(Formula::constraint(x * x - 2, Rel::Lt), s.vars), "(< (* x x) 2)");
  EXPECT_EQ(print_term(Formula::top(), s.vars), "true");
  auto sqrt2 = isolate_real_roots(x * x - 2, 0)[1];
  EXPECT_EQ(print_value(sqrt2), "(root-of (- (* x x) 2) 2)");
  EXPECT_EQ(print_value(AlgebraicNumber(Rational(-1, 2))), "(- (/ 1 2))");
  Assignment m = parse_model("(x (root-of (- (* x x) 2) 2)) (b true)", s.vars);
  EXPECT_EQ(m.reals().at(0), sqrt2);
  EXPECT_EQ(m.bools().at(2), true);
  Assignment m2 = parse_model("x=-1/2, y=3", s.vars);
  EXPECT_EQ(m2.reals().at(0), AlgebraicNumber(Rational(-1, 2)));
  EXPECT_EQ(print_model(m2, s.vars), "(model\n  (define-fun x () Real (- (/ 1 2)))\n  (define-fun y () Real 3))");
}

TEST(Frontend, RoundTripRandomTerms) {
  auto s = declare_xy();
  Polynomial x = Polynomial::variable(0), y = Polynomial::variable(1);
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> coef(-5, 5), pick(0, 9), rel(0, 4), deg(0, 3);
  std::function<Formula(int)> gen = [&](int depth) -> Formula {
    int k = depth > 3 ? 0 : pick(rng);
    if (k < 4) {
      Polynomial p = coef(rng);
      for (int j = 0; j < 3; ++j) p += Polynomial(coef(rng)) * x.pow(deg(rng)) * y.pow(deg(rng));
      return Formula::constraint(p, static_cast<Rel>(rel(rng)));
    }
    if (k == 4) return Formula::boolean(2 + pick(rng) % 2);
    if (k == 5) return Formula::negation(gen(depth + 1));
    if (k == 6) return pick(rng) < 5 ? Formula::top() : Formula::bottom();
    std::vector<Formula> kids;
    for (int i = 0, n = 2 + pick(rng) % 3; i < n; ++i) kids.push_back(gen(depth + 1));
    return k < 8 ? Formula::conjunction(kids) : Formula::disjunction(kids);
  };
  for (int i = 0; i < 10000; ++i) {
    Formula f = gen(0);
    std::string text = print_term(f, s.vars);
    EXPECT_EQ(parse_formula(text, s.vars), f) << text;
  }
}
