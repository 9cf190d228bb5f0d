// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Every check here recomputes its verdict from independent
// evaluation, sampling or Sturm counting rather than trusting the module
// under test.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "nra/cad.hpp"
#include "nra/frontend.hpp"
#include "nra/gen.hpp"
#include "nra/itp.hpp"
#include "nra/mc.hpp"
#include "nra/upoly.hpp"
#include "sampling.hpp"
#include "sturm_oracle.hpp"

using namespace nra;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

const Var X = 0, Y = 1, Z = 2, B = 10;
const Polynomial x = Polynomial::variable(X), y = Polynomial::variable(Y), z = Polynomial::variable(Z);

Formula c(const Polynomial& f, Rel r) { return Formula::constraint(f, r); }

/// Outcome of one criterion: empty `failure` means pass.
struct Outcome {
  std::string failure;
  std::string detail;
};

/// Collects the first failure of a criterion.
struct Checker {
  Outcome out;
  bool expect(bool ok, const std::string& what) {
    if (!ok && out.failure.empty()) out.failure = what;
    return ok;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class T>
bool same_elements(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::is_permutation(a.begin(), a.end(), b.begin());
}

Status solve(const Formula& f, double seconds = 30) {
  Solver s;
  SolverLimits l;
  l.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  s.set_limits(l);
  s.assert_formula(f);
  return s.check().status;
}

Assignment point(std::initializer_list<std::pair<Var, Rational>> vals) {
  Assignment m;
  for (auto& [v, q] : vals) m.set(v, AlgebraicNumber(q));
  return m;
}

// --- 1 ----------------------------------------------------------------------

Outcome circle_model_interpolant() {
  Checker ck;
  Solver s(VarOrder({X, Y}));
  Formula b = Formula::boolean(B);
  s.assert_formula(b);
  s.assert_formula(!b || c(x * x + y * y - 2, Rel::Lt));
  Assignment m = point({{X, 2}});
  auto r = s.check_modulo(m);
  if (!ck.expect(r.status == Status::Unsat, "check_modulo({x=2}) is not unsat")) return ck.out;

  // Equivalence with not(x > root_2(x^2 - 2)): compare on the critical roots
  // and on a grid of rationals around them.
  Formula expected = to_formula(Clause{Literal{RootAtom{X, Rel::Gt, x * x - 2, 2}, false}});
  Formula got = to_formula(r.interpolant);
  std::vector<AlgebraicNumber> probes = isolate_real_roots(x * x - 2, X);
  for (int k = -40; k <= 40; ++k) probes.emplace_back(Rational(k, 10));
  for (auto& v : probes) {
    Assignment p;
    p.set(X, v);
    ck.expect(evaluate(got, p) == evaluate(expected, p), "interpolant differs from not(x > root_2(x^2-2)) at x=" +
                                                              v.to_decimal(3));
  }
  ck.expect(evaluate(got, m) == Tri::False, "interpolant is not false in {x=2}");

  Clause simple = eliminate_extended(r.interpolant, m, VarOrder({X, Y}));
  Clause want{Literal{PolyAtom{x * x - 2, Rel::Gt}, false}, Literal{PolyAtom{x, Rel::Gt}, false}};
  ck.expect(same_elements(simple, want), "eliminated interpolant is " + to_smtlib(to_formula(simple)));
  ck.out.detail = to_smtlib(to_formula(simple));
  return ck.out;
}

// --- 2 ----------------------------------------------------------------------

Outcome circle_cells() {
  Checker ck;
  Polynomial f = x * x + y * y - 2;
  VarOrder order({X, Y});
  auto ext = cell_extended({f}, {{X, 0}, {Y, 0}}, order);
  std::vector<Atom> ys{RootAtom{Y, Rel::Gt, f, 1}, RootAtom{Y, Rel::Lt, f, 2}};
  std::vector<Atom> xs{RootAtom{X, Rel::Gt, x * x - 2, 1}, RootAtom{X, Rel::Lt, x * x - 2, 2}};
  auto level_set = [](const CellDescription& cell, Var v) {
    auto* l = cell.level(v);
    return l ? l->atoms : std::vector<Atom>{};
  };
  ck.expect(same_elements(level_set(ext, Y), ys), "y bounds of the cell at (0,0)");
  ck.expect(same_elements(level_set(ext, X), xs), "x bounds of the cell at (0,0)");

  auto bas = cell_basic({f}, {{X, 1}, {Y, 2}}, order);
  std::vector<Atom> c3{PolyAtom{f, Rel::Gt}, PolyAtom{y, Rel::Gt}, PolyAtom{x * x - 2, Rel::Lt}, PolyAtom{x, Rel::Gt}};
  auto atoms = bas.atoms();
  ck.expect(same_elements(atoms, c3),
            "basic cell at (1,2) is " + to_smtlib(bas.to_formula()));
  ck.out.detail = to_smtlib(bas.to_formula());
  return ck.out;
}

// --- 3 ----------------------------------------------------------------------

Outcome generalization_extends() {
  Checker ck;
  Formula f = c(x * x + y * y - 2, Rel::Gt);
  Assignment m = point({{X, 1}, {Y, 2}});
  Formula g = generalize(f, m, {X}, VarOrder({X, Y}));
  std::vector<Formula> want{c(x * x - 2, Rel::Lt), c(x, Rel::Gt)};
  std::vector<Formula> got{g};
  if (g.kind() == Kind::And) got = g.children();
  ck.expect(same_elements(got, want), "generalization is " + to_smtlib(g));

  std::vector<Atom> atoms;
  for (auto& p : formula_polys(g)) atoms.push_back(PolyAtom{p, Rel::Eq});
  std::mt19937 rng(3);
  int samples = 0;
  for (int tries = 0; tries < 5000 && samples < 100; ++tries) {
    auto cands = sampling::candidates(rng, atoms, X, {});
    AlgebraicNumber v = cands[std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng)];
    Assignment p;
    p.set(X, v);
    if (evaluate(g, p) != Tri::True) continue;
    ++samples;
    Solver s(VarOrder({X, Y}));
    s.assert_formula(f);
    auto r = s.check_modulo(p);
    ck.expect(r.status == Status::Sat && evaluate(f, r.model) == Tri::True,
              "x=" + v.to_decimal(4) + " does not extend to a model");
  }
  ck.expect(samples == 100, "only " + std::to_string(samples) + " samples of the generalization");
  ck.out.detail = std::to_string(samples) + " samples extended";
  return ck.out;
}

// --- 4 ----------------------------------------------------------------------

Outcome cauchy_schwarz(const fs::path& inputs) {
  Checker ck;
  TransitionSystem strong = parse_system(slurp(inputs / "systems/cauchy_strong.nlts"));
  auto k = kinduction(strong, strong.prop, 1);
  ck.expect(k.verdict == Verdict::Valid, std::string("k-induction at k=1 on the strengthened property: ") +
                                             verdict_name(k.verdict));

  TransitionSystem weak = parse_system(slurp(inputs / "systems/cauchy.nlts"));
  MCOptions o;
  o.engine = Engine::Itp;
  o.max_k = 10;
  o.limits.deadline = Clock::now() + std::chrono::seconds(60);
  auto start = Clock::now();
  auto r = check(weak, o);
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  ck.expect(r.verdict == Verdict::Valid, std::string("interpolation on the plain property: ") + verdict_name(r.verdict));
  ck.expect(secs <= 60, "interpolation took " + std::to_string(secs) + " s");
  if (r.verdict == Verdict::Valid)
    ck.expect(is_inductive_invariant(weak, r.invariant, weak.prop), "returned invariant is not inductive");
  char buf[64];
  std::snprintf(buf, sizeof buf, "itp valid in %.2f s", secs);
  ck.out.detail = buf;
  return ck.out;
}

// --- 5 and 6 ----------------------------------------------------------------

struct Pair {
  Formula a, b;
};

Polynomial random_poly(std::mt19937& rng, const std::vector<Polynomial>& vars) {
  std::uniform_int_distribution<int> coef(-4, 4), terms(1, 3), deg(0, 3);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  for (;;) {
    Polynomial p(coef(rng));
    for (int t = terms(rng); t > 0; --t) {
      Polynomial m(coef(rng));
      for (int budget = deg(rng); budget > 0; --budget) m *= vars[pick(rng)];
      p += m;
    }
    if (!p.is_constant() && p.total_degree() <= 3) return p;
  }
}

Formula random_side(std::mt19937& rng, const std::vector<Polynomial>& vars) {
  std::uniform_int_distribution<int> count(1, 3), rel(0, 4), coin(0, 3);
  std::vector<Formula> fs;
  for (int i = count(rng); i > 0; --i) {
    Formula f = c(random_poly(rng, vars), static_cast<Rel>(rel(rng)));
    if (coin(rng) == 0) f = f || c(random_poly(rng, vars), static_cast<Rel>(rel(rng)));
    fs.push_back(f);
  }
  return Formula::conjunction(std::move(fs));
}

/// Pairs over at most three variables: x shared, y on either side, z local to one.
Pair random_pair(std::mt19937& rng) {
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return {random_side(rng, {x, y}), random_side(rng, {x, y})};
    case 1: return {random_side(rng, {x, y, z}), random_side(rng, {x, y})};
    default: return {random_side(rng, {x, y}), random_side(rng, {x, z})};
  }
}

struct ItpCorpus {
  int unsat = 0, sat = 0, unknown = 0;
  std::size_t max_iterations = 0;
  std::string contract_failure, sequence_failure;
  int contract_failures = 0, sequence_failures = 0;
};

ItpCorpus run_itp_corpus() {
  ItpCorpus out;
  std::mt19937 rng(2024);
  auto note = [](std::string& slot, int& count, const std::string& msg) {
    if (slot.empty()) slot = msg;
    ++count;
  };
  for (int n = 0; out.unsat < 200 && n < 4000; ++n) {
    Pair p = random_pair(rng);
    std::string tag = "pair " + std::to_string(n) + ": ";
    InterpolationOptions io;
    io.limits.deadline = Clock::now() + std::chrono::seconds(5);
    auto r = interpolate(p.a, p.b, io);
    out.max_iterations = std::max(out.max_iterations, r.iterations);
    if (r.iterations > 10000) note(out.sequence_failure, out.sequence_failures, tag + "over 10000 iterations");
    if (r.status == Status::Unknown) {
      ++out.unknown;
      continue;
    }
    if (r.status == Status::Sat) {
      ++out.sat;
      if (evaluate(p.a && p.b, r.model) != Tri::True)
        note(out.contract_failure, out.contract_failures, tag + "sat model does not satisfy A and B");
      continue;
    }
    ++out.unsat;

    // Contract: A implies I, I and B are inconsistent, I over shared variables.
    Formula i = to_formula(r.interpolant);
    auto shared = shared_vars(p.a, p.b);
    if (solve(p.a && !i) != Status::Unsat) note(out.contract_failure, out.contract_failures, tag + "A and not I");
    if (solve(i && p.b) != Status::Unsat) note(out.contract_failure, out.contract_failures, tag + "I and B");
    for (Var v : formula_vars(i))
      if (!shared.count(v)) note(out.contract_failure, out.contract_failures, tag + "I mentions a local variable");

    // Sequence audit, step k with model M_k and clause I_k.
    Formula earlier = Formula::top();
    for (std::size_t k = 0; k < r.log.size(); ++k) {
      const auto& step = r.log[k];
      std::string at = tag + "step " + std::to_string(k) + ": ";
      if (evaluate(earlier, step.model) != Tri::True)
        note(out.sequence_failure, out.sequence_failures, at + "model violates earlier clauses");
      Solver s(interpolation_order(p.a, p.b));
      s.assert_formula(p.a);
      if (s.check_modulo(step.model.restricted(shared)).status != Status::Unsat)
        note(out.sequence_failure, out.sequence_failures, at + "model consistent with A");
      Formula ik = to_formula(step.clause);
      if (evaluate(ik, step.model) != Tri::False)
        note(out.sequence_failure, out.sequence_failures, at + "clause not false in its model");
      if (solve(p.a && !ik) != Status::Unsat)
        note(out.sequence_failure, out.sequence_failures, at + "clause not implied by A");
      earlier = earlier && ik;
    }
  }
  return out;
}

// --- 7 ----------------------------------------------------------------------

Outcome isolation_vs_sturm() {
  Checker ck;
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coef(-9, 9), deg(1, 6);
  int agree = 0;
  for (int it = 0; it < 1000; ++it) {
    int d = deg(rng);
    UPoly u(d + 1);
    for (auto& a : u) a = coef(rng);
    if (u.back() == 0) u.back() = 1;
    auto roots = isolate_real_roots(u);
    bool ok = static_cast<int>(roots.size()) == oracle::count_roots(u);
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) ok = ok && roots[i] < roots[i + 1];
    for (auto& r : roots) {
      if (r.is_rational()) {
        ok = ok && upoly::sign_at(u, r.rational()) == 0;
      } else {
        // Exactly one root of u in the open isolating interval.
        int n = oracle::count_roots(u, r.lo(), r.hi()) - (upoly::sign_at(u, r.hi()) == 0 ? 1 : 0);
        ok = ok && n == 1;
      }
    }
    if (ok) ++agree;
    else ck.expect(false, "disagreement on polynomial " + std::to_string(it));
  }
  ck.out.detail = std::to_string(agree) + "/1000 agree";
  return ck.out;
}

// --- 8 ----------------------------------------------------------------------

std::vector<Polynomial> random_polys(std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), count(1, 3);
  std::vector<Polynomial> out;
  int n = count(rng);
  while (static_cast<int>(out.size()) < n) {
    Polynomial p;
    for (int t = 0; t < 3; ++t) p += Polynomial(coef(rng)) * x.pow(deg(rng)) * y.pow(deg(rng));
    if (p.is_constant()) continue;
    out.push_back(p);
  }
  return out;
}

/// Random point of the cell over (x, y). A variable without a level is
/// unconstrained and gets any rational.
std::optional<RealAssignment> sample_point(std::mt19937& rng, const CellDescription& cell) {
  RealAssignment m;
  for (Var v : {X, Y}) {
    auto* level = cell.level(v);
    if (!level) {
      m[v] = sampling::random_between(rng, Rational(-5), Rational(5));
      continue;
    }
    std::vector<AlgebraicNumber> good;
    for (auto& cand : sampling::candidates(rng, level->atoms, v, m)) {
      m[v] = cand;
      Assignment a = sampling::to_assignment(m);
      bool ok = true;
      for (auto& at : level->atoms) ok = ok && evaluate(at, a) == Tri::True;
      if (ok) good.push_back(cand);
    }
    if (good.empty()) return std::nullopt;
    m[v] = good[std::uniform_int_distribution<std::size_t>(0, good.size() - 1)(rng)];
  }
  return m;
}

Outcome cell_sampling() {
  Checker ck;
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> val(-6, 6);
  VarOrder order({X, Y});
  long checked = 0;
  for (int it = 0; it < 100; ++it) {
    auto F = random_polys(rng);
    RealAssignment m{{X, Rational(val(rng), 2)}, {Y, Rational(val(rng), 2)}};
    auto ext = cell_extended(F, m, order);
    auto bas = cell_basic(F, m, order);
    std::string tag = "cell " + std::to_string(it) + ": ";
    for (int s = 0; s < 1000; ++s) {
      // Alternate between the two descriptions; the basic cell lies inside
      // the extended one, so its samples must meet every extended bound.
      auto p = sample_point(rng, s % 2 ? ext : bas);
      if (!ck.expect(p.has_value(), tag + "no sample")) break;
      Assignment ap = sampling::to_assignment(*p);
      for (auto& a : ext.atoms()) ck.expect(evaluate(a, ap) == Tri::True, tag + "sample violates an extended bound");
      for (auto& f : F) ck.expect(sign_at(f, *p) == sign_at(f, m), tag + "sample changes a polynomial sign");
      ++checked;
    }
    if (!ck.out.failure.empty()) break;
  }
  ck.out.detail = std::to_string(checked) + " samples";
  return ck.out;
}

// --- 9 ----------------------------------------------------------------------

Outcome trace_replay(const fs::path& inputs) {
  Checker ck;
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(inputs / "systems"))
    if (e.path().extension() == ".nlts") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  ck.expect(files.size() >= 10, "fewer than 10 systems");
  int invalid = 0;
  for (auto& f : files) {
    TransitionSystem sys = parse_system(slurp(f));
    for (Engine e : {Engine::Bmc, Engine::KInduction, Engine::Itp}) {
      MCOptions o;
      o.engine = e;
      o.max_k = 6;
      o.limits.deadline = Clock::now() + std::chrono::seconds(5);
      MCResult r;
      try {
        r = check(sys, o);
      } catch (const std::logic_error& ex) {
        // check() throws when its own trace fails to replay.
        ck.expect(false, f.filename().string() + ": " + ex.what());
        continue;
      }
      if (r.verdict != Verdict::Invalid) continue;
      ++invalid;
      ck.expect(replay(sys, r.trace, sys.prop), f.filename().string() + ": trace does not replay");
    }
  }
  ck.expect(invalid > 0, "no invalid verdicts to replay");
  ck.out.detail = std::to_string(invalid) + " traces over " + std::to_string(files.size()) + " systems";
  return ck.out;
}

}  // namespace

int main(int argc, char** argv) {
  fs::path inputs = argc > 1 ? fs::path(argv[1]) : fs::path(NRA_INPUTS_DIR);
  int failed = 0;
  auto report = [&failed](int id, const char* name, double limit_s, const std::function<Outcome()>& run) {
    auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.failure = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (o.failure.empty() && limit_s > 0 && secs > limit_s) o.failure = "over the time limit";
    bool ok = o.failure.empty();
    if (!ok) ++failed;
    std::printf("[%s] %d %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", id, name, secs, ok ? "" : ": ",
                ok ? "" : o.failure.c_str());
    if (!o.detail.empty()) std::printf("       %s\n", o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "model interpolant for b, not b or x^2+y^2<2 under x=2", 1, circle_model_interpolant);
  report(2, "cells of x^2+y^2-2 at (0,0) and (1,2)", 1, circle_cells);
  report(3, "generalization of x^2+y^2>2 onto x", 5, generalization_extends);
  report(4, "Cauchy-Schwarz by k-induction and interpolation", 0, [&] { return cauchy_schwarz(inputs); });

  ItpCorpus corpus;
  auto corpus_start = Clock::now();
  bool corpus_ok = true;
  std::string corpus_error;
  try {
    corpus = run_itp_corpus();
  } catch (const std::exception& e) {
    corpus_ok = false;
    corpus_error = std::string("exception: ") + e.what();
  }
  double corpus_secs = std::chrono::duration<double>(Clock::now() - corpus_start).count();
  char stats[160];
  std::snprintf(stats, sizeof stats, "%d unsat, %d sat, %d unknown; at most %zu iterations; corpus %.1f s",
                corpus.unsat, corpus.sat, corpus.unknown, corpus.max_iterations, corpus_secs);
  report(5, "interpolant contract on random pairs", 0, [&] {
    Outcome o{corpus_error, stats};
    if (corpus_ok && corpus.unsat < 200) o.failure = "fewer than 200 unsat pairs";
    if (corpus_ok && corpus.contract_failures)
      o.failure = std::to_string(corpus.contract_failures) + " failures, first: " + corpus.contract_failure;
    return o;
  });
  report(6, "interpolation sequence audit and iteration bound", 0, [&] {
    Outcome o{corpus_error, stats};
    if (corpus_ok && corpus.sequence_failures)
      o.failure = std::to_string(corpus.sequence_failures) + " failures, first: " + corpus.sequence_failure;
    return o;
  });

  report(7, "root isolation against Sturm counts", 0, isolation_vs_sturm);
  report(8, "sign invariance of sampled cells", 0, cell_sampling);
  report(9, "trace replay over the system corpus", 0, [&] { return trace_replay(inputs); });

  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed ? 1 : 0;
}
