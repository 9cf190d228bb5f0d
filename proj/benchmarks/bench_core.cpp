#include <benchmark/benchmark.h>

#include <random>

#include "nra/cad.hpp"
#include "nra/frontend.hpp"
#include "nra/itp.hpp"
#include "nra/mc.hpp"

using namespace nra;

namespace {

Polynomial random_univariate(std::mt19937_64& rng, Var x, int degree) {
  std::uniform_int_distribution<int> coef(-20, 20);
  Polynomial p(coef(rng));
  Polynomial power(1);
  for (int d = 1; d <= degree; ++d) {
    power *= Polynomial::variable(x);
    p += Polynomial(coef(rng)) * power;
  }
  return p;
}

void BM_IsolateRoots(benchmark::State& state) {
  VarTable vars;
  Var x = vars.declare("x", Sort::Real);
  std::mt19937_64 rng(7);
  std::vector<Polynomial> polys;
  for (int i = 0; i < 64; ++i) {
    Polynomial p = random_univariate(rng, x, static_cast<int>(state.range(0)));
    if (!p.is_constant()) polys.push_back(p);
  }
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(isolate_real_roots(polys[i++ % polys.size()], x));
}
BENCHMARK(BM_IsolateRoots)->Arg(3)->Arg(6)->Arg(10);

void BM_Cell(benchmark::State& state) {
  VarTable vars;
  Var x = vars.declare("x", Sort::Real), y = vars.declare("y", Sort::Real);
  Polynomial X = Polynomial::variable(x), Y = Polynomial::variable(y);
  std::vector<Polynomial> F{X * X + Y * Y - Polynomial(1), Y - X * X * X, X * Y - Polynomial(1)};
  RealAssignment m{{x, Rational(1, 3)}, {y, Rational(-1, 5)}};
  VarOrder order({x, y});
  for (auto _ : state)
    benchmark::DoNotOptimize(state.range(0) ? cell_basic(F, m, order) : cell_extended(F, m, order));
}
BENCHMARK(BM_Cell)->Arg(0)->Arg(1);

const char* kBoolCircle = R"(
(declare-const x Real)
(declare-const y Real)
(declare-const b Bool)
(assert (or b (and (> (* x x) 2) (> x 0))))
(assert (or (not b) (< (+ (* x x) (* y y)) 1)))
)";

void BM_SolverCheck(benchmark::State& state) {
  ProblemScript script = parse_script(kBoolCircle);
  Formula f = script.all();
  for (auto _ : state) {
    Solver s;
    s.assert_formula(f);
    benchmark::DoNotOptimize(s.check());
  }
}
BENCHMARK(BM_SolverCheck);

void BM_InterpolateCircleLine(benchmark::State& state) {
  ProblemScript script = parse_script(R"(
(declare-const x Real)
(declare-const y Real)
(declare-const z Real)
(assert-A (< (+ (* x x) (* y y)) 1))
(assert-B (and (> x 2) (= z (* x y))))
)");
  Formula a = script.conjunction(AssertKind::A), b = script.conjunction(AssertKind::B);
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(a, b));
}
BENCHMARK(BM_InterpolateCircleLine);

const char* kCounter = R"(
(define-system
  :state ((x Real))
  :init (= x 0)
  :trans (= x' (+ x 1))
  :prop (< (* x x) 4))
)";

void BM_ModelCheckCounter(benchmark::State& state) {
  TransitionSystem sys = parse_system(kCounter);
  MCOptions o;
  o.engine = static_cast<Engine>(state.range(0));
  o.max_k = 4;
  for (auto _ : state) benchmark::DoNotOptimize(check(sys, o));
}
BENCHMARK(BM_ModelCheckCounter)->Arg(static_cast<int>(Engine::Bmc))->Arg(static_cast<int>(Engine::Itp));

}  // namespace

BENCHMARK_MAIN();
