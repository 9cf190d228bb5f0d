#include "nra/mc.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <stdexcept>

#include "nra/gen.hpp"

namespace nra {

namespace {

/// Copies of the state variables per step. Step 0 uses the state variables
/// themselves.
class Unroller {
 public:
  explicit Unroller(const TransitionSystem& sys) : sys_(sys), vars_(sys.vars) {}

  Var at(std::size_t i, unsigned j) {
    if (j == 0) return sys_.state[i];
    while (copies_.size() < j) {
      std::vector<Var> step;
      unsigned n = static_cast<unsigned>(copies_.size()) + 1;
      for (Var s : sys_.state) step.push_back(vars_.fresh(sys_.vars.name(s) + "@" + std::to_string(n), sys_.vars.sort(s)));
      copies_.push_back(std::move(step));
    }
    return copies_[j - 1][i];
  }

  /// f over the state variables, moved to step j.
  Formula state(const Formula& f, unsigned j) {
    if (j == 0) return f;
    std::map<Var, Var> ren;
    for (std::size_t i = 0; i < sys_.state.size(); ++i) ren[sys_.state[i]] = at(i, j);
    return rename(f, ren);
  }

  /// f over the step-j variables, moved back to the state variables.
  Formula unstate(const Formula& f, unsigned j) {
    if (j == 0) return f;
    std::map<Var, Var> ren;
    for (std::size_t i = 0; i < sys_.state.size(); ++i) ren[at(i, j)] = sys_.state[i];
    return rename(f, ren);
  }

  /// The transition from step j to step j + 1.
  Formula trans(unsigned j) {
    std::map<Var, Var> ren;
    for (std::size_t i = 0; i < sys_.state.size(); ++i) {
      ren[sys_.state[i]] = at(i, j);
      ren[sys_.next[i]] = at(i, j + 1);
    }
    return rename(sys_.trans, ren);
  }

  /// p over the state variables, moved to step j.
  Polynomial step_poly(const Polynomial& p, unsigned j) {
    if (j == 0) return p;
    std::map<Var, Var> ren;
    for (std::size_t i = 0; i < sys_.state.size(); ++i) ren[sys_.state[i]] = at(i, j);
    return rename(p, ren);
  }

  std::set<Var> step_vars(unsigned j) {
    std::set<Var> out;
    for (std::size_t i = 0; i < sys_.state.size(); ++i) out.insert(at(i, j));
    return out;
  }

  /// State at step j read off a model; unconstrained variables get 0 / false.
  Assignment extract(const Assignment& m, unsigned j) {
    Assignment s;
    for (std::size_t i = 0; i < sys_.state.size(); ++i) {
      Var v = at(i, j), x = sys_.state[i];
      if (auto val = m.get(v))
        s.set(x, *val);
      else if (sys_.vars.sort(x) == Sort::Bool)
        s.set(x, false);
      else
        s.set(x, AlgebraicNumber(0));
    }
    return s;
  }

  Var fresh_bool(const std::string& name) { return vars_.fresh(name, Sort::Bool); }

 private:
  const TransitionSystem& sys_;
  VarTable vars_;
  std::vector<std::vector<Var>> copies_;
};

void add_stats(Statistics& into, const Statistics& s) {
  into.conflicts += s.conflicts;
  into.decisions += s.decisions;
  into.propagations += s.propagations;
  into.learned += s.learned;
  into.checks += s.checks;
}

struct BmcOutcome {
  Status status = Status::Unsat;  // Sat: trace found
  Trace trace;
};

/// Searches depths first..k; each depth is enabled by an activation literal
/// and asserted away once refuted.
BmcOutcome bmc_impl(const TransitionSystem& sys, const Formula& p, unsigned k, const SolverLimits& limits,
                    Statistics* stats) {
  Unroller u(sys);
  Solver s;
  s.set_limits(limits);
  s.assert_formula(sys.init);
  BmcOutcome out;
  for (unsigned j = 0; j <= k; ++j) {
    if (j > 0) s.assert_formula(u.trans(j - 1));
    Var act = u.fresh_bool("bad@" + std::to_string(j));
    Formula bad = Formula::negation(u.state(p, j));
    s.assert_formula(!Formula::boolean(act) || bad);
    Assignment m0;
    m0.set(act, true);
    auto r = s.check_modulo(m0);
    if (r.status == Status::Unknown) {
      out.status = Status::Unknown;
      break;
    }
    if (r.status == Status::Sat) {
      out.status = Status::Sat;
      for (unsigned i = 0; i <= j; ++i) out.trace.push_back(u.extract(r.model, i));
      break;
    }
    s.assert_formula(u.state(p, j));
  }
  if (stats) add_stats(*stats, s.stats());
  return out;
}

Status solve(const Formula& f, const SolverLimits& limits, Statistics* stats = nullptr) {
  Solver s;
  s.set_limits(limits);
  s.assert_formula(f);
  auto r = s.check();
  if (stats) add_stats(*stats, s.stats());
  return r.status;
}

/// k consecutive p-states followed by a transition into a non-p state.
Status kinduction_step(const TransitionSystem& sys, const Formula& p, unsigned k, const SolverLimits& limits,
                       Statistics* stats) {
  Unroller u(sys);
  std::vector<Formula> fs;
  for (unsigned j = 0; j < k; ++j) {
    fs.push_back(u.state(p, j));
    fs.push_back(u.trans(j));
  }
  fs.push_back(Formula::negation(u.state(p, k)));
  return solve(Formula::conjunction(std::move(fs)), limits, stats);
}

/// Next-state definitions s' = q(s) taken from top-level equalities of the
/// transition, by position in sys.state. Empty unless every state variable is
/// real and defined.
std::vector<Polynomial> definitions(const TransitionSystem& sys) {
  std::set<Var> next(sys.next.begin(), sys.next.end());
  std::map<Var, Polynomial> found;
  std::vector<Formula> conjuncts;
  if (sys.trans.kind() == Kind::And)
    conjuncts = sys.trans.children();
  else
    conjuncts.push_back(sys.trans);
  for (auto& c : conjuncts) {
    if (c.kind() != Kind::Atom) continue;
    auto* pa = std::get_if<PolyAtom>(&c.as_atom());
    if (!pa || pa->rel != Rel::Eq) continue;
    for (Var n : sys.next) {
      if (found.count(n) || pa->f.degree(n) != 1) continue;
      auto cs = pa->f.coefficients(n);
      const Polynomial& lead = cs[1];
      if (!lead.is_constant() || abs(lead.constant_term()) != 1) continue;
      bool free = true;
      for (Var v : cs[0].vars()) free = free && !next.count(v);
      if (!free) continue;
      found.emplace(n, lead.constant_term() == 1 ? -cs[0] : cs[0]);
      break;
    }
  }
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < sys.state.size(); ++i) {
    if (sys.vars.sort(sys.state[i]) != Sort::Real || !found.count(sys.next[i])) return {};
    out.push_back(found.at(sys.next[i]));
  }
  return out;
}

bool deadline_passed(const SolverLimits& limits) {
  return limits.deadline && std::chrono::steady_clock::now() > *limits.deadline;
}

unsigned max_degree(const Formula& f) {
  unsigned d = 0;
  for (auto& p : formula_polys(f)) d = std::max(d, p.total_degree());
  return d;
}

/// Unsat when all three invariant conditions hold, Sat when one fails.
Status invariant_status(const TransitionSystem& sys, const Formula& inv, const Formula& p,
                        const SolverLimits& limits) {
  Unroller u(sys);
  Status worst = Status::Unsat;
  for (const Formula& q : {sys.init && Formula::negation(inv), inv && u.trans(0) && Formula::negation(u.state(inv, 1)),
                           inv && Formula::negation(p)}) {
    Status s = solve(q, limits);
    if (s == Status::Sat) return s;
    if (s == Status::Unknown) worst = s;
  }
  return worst;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Valid: return "valid";
    case Verdict::Invalid: return "invalid";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Trace> bmc(const TransitionSystem& sys, unsigned k, const SolverLimits& limits) {
  auto r = bmc_impl(sys, sys.prop, k, limits, nullptr);
  if (r.status != Status::Sat) return std::nullopt;
  return r.trace;
}

MCResult kinduction(const TransitionSystem& sys, const Formula& p, unsigned k, const SolverLimits& limits) {
  MCResult res;
  res.k = k;
  if (k == 0) return res;
  auto base = bmc_impl(sys, p, k, limits, &res.stats);
  if (base.status == Status::Sat) {
    res.verdict = Verdict::Invalid;
    res.trace = std::move(base.trace);
    return res;
  }
  if (base.status == Status::Unknown) return res;
  if (kinduction_step(sys, p, k, limits, &res.stats) == Status::Unsat) {
    res.verdict = Verdict::Valid;
    res.invariant = p;
  }
  return res;
}

MCResult itp_reach(const TransitionSystem& sys, const Formula& p, unsigned max_k, const SolverLimits& limits) {
  MCResult res;
  if (max_k == 0) return res;
  auto zero = bmc_impl(sys, p, 0, limits, &res.stats);
  if (zero.status != Status::Unsat) {
    if (zero.status == Status::Sat) {
      res.verdict = Verdict::Invalid;
      res.trace = std::move(zero.trace);
    }
    return res;
  }

  Unroller u(sys);
  const std::vector<Polynomial> defs = definitions(sys);
  InterpolationOptions io;
  io.limits = limits;
  // States known to reach a bad state, with the number of steps needed.
  std::vector<std::pair<Formula, unsigned>> bad_cubes;
  constexpr std::size_t kCubesPerDepth = 4;
  constexpr unsigned kMaxCubeDegree = 4;
  // With a definitional transition, steps above `from` are substituted away.
  auto collapse = [&](Formula f, unsigned from, unsigned to) {
    if (defs.empty()) return f;
    for (unsigned j = to; j > from; --j)
      for (std::size_t i = 0; i < defs.size(); ++i) f = substitute(f, u.at(i, j), u.step_poly(defs[i], j - 1));
    return f;
  };

  for (unsigned k = 1; k <= max_k; ++k) {
    res.k = k;
    std::size_t cubes_here = 0;
    Formula reach = sys.init;
    while (true) {
      // One step from the current over-approximation...
      Formula a = u.state(reach, 0) && u.trans(0);
      // ...into a state that reaches a bad one within k - 1 further steps.
      std::vector<Formula> suffix, bad;
      for (unsigned j = 1; j < k; ++j) suffix.push_back(u.trans(j));
      for (unsigned j = 1; j <= k; ++j) bad.push_back(Formula::negation(u.state(p, j)));
      unsigned depth = k;
      for (auto& [cube, d] : bad_cubes) {
        bad.push_back(u.state(cube, 1));
        depth = std::max(depth, d + 1);
      }
      suffix.push_back(Formula::disjunction(std::move(bad)));
      Formula b = collapse(Formula::conjunction(std::move(suffix)), 1, k);

      // Interpolating with the roles swapped and negating yields a formula
      // shaped by the bad states rather than by the image, which tends to
      // generalize instead of enumerating reachable states.
      auto r = interpolate(b, a, io);
      res.interpolant_clauses += r.interpolant.size();
      if (r.status == Status::Unknown) return res;
      if (r.status == Status::Sat) {
        if (reach == sys.init) {
          auto cex = bmc_impl(sys, p, depth, limits, &res.stats);
          if (cex.status == Status::Sat) {
            res.verdict = Verdict::Invalid;
            res.trace = std::move(cex.trace);
          }
          return res;
        }
        // Spurious: the over-approximation contains a state that leads to a
        // bad one. Block a generalization of that state and start over.
        if (deadline_passed(limits)) return res;
        // Substituting the successor keeps the projection inside generalize
        // small.
        Formula pre = collapse(u.trans(0) && b, 0, 1);
        // Preimages compose the transition, so degrees grow with every cube;
        // past a point a deeper unrolling is the cheaper way forward.
        if (max_degree(pre) > kMaxCubeDegree) break;
        Formula cube;
        try {
          DeadlineScope scope(limits.deadline);
          cube = generalize(pre, r.model, u.step_vars(0));
        } catch (const Interrupted&) {
          return res;
        }
        if (max_degree(cube) > kMaxCubeDegree) break;
        bad_cubes.emplace_back(cube, depth);
        if (++cubes_here >= kCubesPerDepth) break;
        reach = sys.init;
        continue;
      }
      Formula next = u.unstate(Formula::negation(to_formula(r.interpolant)), 1);
      if (solve(next && Formula::negation(reach), limits, &res.stats) == Status::Unsat) {
        res.verdict = Verdict::Valid;
        res.invariant = reach;
        return res;
      }
      reach = reach || next;
    }
  }
  return res;
}

MCResult check(const TransitionSystem& sys, const MCOptions& options) {
  MCResult res;
  switch (options.engine) {
    case Engine::Bmc: {
      auto r = bmc_impl(sys, sys.prop, options.max_k, options.limits, &res.stats);
      res.k = options.max_k;
      if (r.status == Status::Sat) {
        res.verdict = Verdict::Invalid;
        res.trace = std::move(r.trace);
        res.k = static_cast<unsigned>(res.trace.size() - 1);
      }
      break;
    }
    case Engine::KInduction:
      for (unsigned k = 1; k <= options.max_k; ++k) {
        Statistics acc = res.stats;
        res = kinduction(sys, sys.prop, k, options.limits);
        add_stats(res.stats, acc);
        if (res.verdict != Verdict::Unknown) break;
      }
      break;
    case Engine::Itp: res = itp_reach(sys, sys.prop, options.max_k, options.limits); break;
  }
  if (res.verdict == Verdict::Invalid && !replay(sys, res.trace, sys.prop))
    throw std::logic_error("counterexample does not replay");
  // k-induction at depth k > 1 certifies p without a 1-inductive invariant.
  bool inductive = options.engine == Engine::Itp || res.k == 1;
  if (res.verdict == Verdict::Valid && inductive) {
    Status s = invariant_status(sys, res.invariant, sys.prop, options.limits);
    if (s == Status::Sat) throw std::logic_error("invariant is not inductive");
    if (s == Status::Unknown) res.verdict = Verdict::Unknown;
  }
  return res;
}

bool replay(const TransitionSystem& sys, const Trace& trace, const Formula& p) {
  if (trace.empty()) return false;
  if (evaluate(sys.init, trace.front()) != Tri::True) return false;
  for (std::size_t j = 0; j + 1 < trace.size(); ++j) {
    Assignment m = trace[j];
    for (std::size_t i = 0; i < sys.state.size(); ++i)
      if (auto v = trace[j + 1].get(sys.state[i])) m.set(sys.next[i], *v);
    if (evaluate(sys.trans, m) != Tri::True) return false;
  }
  return evaluate(p, trace.back()) == Tri::False;
}

bool is_inductive_invariant(const TransitionSystem& sys, const Formula& inv, const Formula& p,
                            const SolverLimits& limits) {
  return invariant_status(sys, inv, p, limits) == Status::Unsat;
}

std::string print_trace(const TransitionSystem& sys, const Trace& trace) {
  std::string out;
  for (std::size_t j = 0; j < trace.size(); ++j) {
    out += "(step " + std::to_string(j);
    for (Var s : sys.state)
      if (auto v = trace[j].get(s)) out += " (" + sys.vars.name(s) + " " + print_value(*v) + ")";
    out += ")\n";
  }
  return out;
}

}  // namespace nra
