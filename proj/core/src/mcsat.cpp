#include "nra/mcsat.hpp"

#include <algorithm>
#include <climits>
#include <stdexcept>
#include <unordered_map>

namespace nra {

namespace {

using AtomId = std::uint32_t;
using Lit = std::uint32_t;  // 2 * atom + negated
using ClauseId = std::uint32_t;

constexpr Var kAuxBoolBase = 0x40000000u;

Lit mk_lit(AtomId a, bool negated) { return 2 * a + (negated ? 1 : 0); }
AtomId lit_atom(Lit l) { return l >> 1; }
bool lit_neg(Lit l) { return l & 1; }
Lit lit_not(Lit l) { return l ^ 1; }

bool eval_real_atom(const Atom& a, const RealAssignment& m) {
  if (auto* p = std::get_if<PolyAtom>(&a)) return holds(p->rel, sign_at(p->f, m));
  auto& r = std::get<RootAtom>(a);
  auto roots = roots_at(r.f, r.x, m);
  if (roots.nullified || roots.roots.size() < r.k) return false;
  return holds(r.rel, compare(m.at(r.x), roots.roots[r.k - 1]));
}

struct ClauseData {
  std::vector<Lit> lits;
  bool learned = false;
  bool deleted = false;
  bool has_root = false;
};

}  // namespace

struct Solver::Impl {
  VarOrder base_order;
  SolverLimits limits;
  Statistics stats;
  std::vector<Formula> assertions;

  // Atoms.
  std::vector<Atom> atoms;
  std::unordered_map<Atom, AtomId, AtomHash> atom_index;
  std::vector<std::vector<Var>> atom_reals;
  std::vector<int> atom_level;
  std::vector<std::vector<ClauseId>> atom_clauses;
  Var next_aux = kAuxBoolBase;

  // Clauses.
  std::vector<ClauseData> clauses;
  bool trivially_unsat = false;

  // Effective order of the current check.
  std::vector<Var> vars;
  std::unordered_map<Var, int> var_level;
  std::vector<std::vector<AtomId>> level_atoms;
  std::vector<Var> previous_order;
  bool started = false;

  // Trail.
  std::vector<TrailEntry> trail;
  std::vector<AtomId> trail_atom;  // atom of Boolean entries
  std::vector<ClauseId> trail_reason;
  std::vector<Tri> atom_value;
  std::vector<int> atom_pos;
  RealAssignment reals;
  std::vector<int> level_pos;
  std::vector<std::uint64_t> level_stamp;
  std::vector<std::uint64_t> level_version;
  std::uint64_t stamp_counter = 2;
  int stage = 0;

  // Input model.
  Assignment m0;
  std::vector<AtomId> model_bools;
  std::optional<std::vector<Lit>> model_clash;
  std::size_t model_reals = 0;

  // Caches.
  std::vector<std::uint64_t> eval_stamp;
  std::vector<char> eval_val;
  std::vector<std::uint64_t> set_stamp;
  std::vector<IntervalSet> set_cache;
  std::uint64_t feasible_epoch = 0, feasible_version = 0;
  int feasible_level = -1;
  IntervalSet feasible_cache;

  // Propagation.
  std::vector<ClauseId> queue;
  std::vector<char> in_queue;
  std::optional<std::vector<Lit>> pending_conflict;

  // ---------------------------------------------------------------------
  // Atoms and levels

  int level_of_var(Var v) {
    auto it = var_level.find(v);
    if (it != var_level.end()) return it->second;
    // Variables first seen mid-check go on top of the effective order.
    int l = static_cast<int>(vars.size());
    vars.push_back(v);
    var_level.emplace(v, l);
    level_atoms.emplace_back();
    level_pos.push_back(-1);
    level_stamp.push_back(0);
    level_version.push_back(0);
    return l;
  }

  int compute_atom_level(AtomId a) {
    int l = -1;
    for (Var v : atom_reals[a]) l = std::max(l, level_of_var(v));
    return l;
  }

  AtomId intern(const Atom& a) {
    auto it = atom_index.find(a);
    if (it != atom_index.end()) return it->second;
    AtomId id = static_cast<AtomId>(atoms.size());
    atoms.push_back(a);
    atom_index.emplace(a, id);
    atom_reals.push_back(std::holds_alternative<BoolAtom>(a) ? std::vector<Var>{} : atom_vars(a));
    atom_clauses.emplace_back();
    atom_value.push_back(Tri::Undef);
    atom_pos.push_back(-1);
    eval_stamp.push_back(0);
    eval_val.push_back(0);
    set_stamp.push_back(0);
    set_cache.emplace_back();
    int l = -1;
    if (started) {
      l = compute_atom_level(id);
      if (l >= 0) level_atoms[l].push_back(id);
    }
    atom_level.push_back(l);
    return id;
  }

  Lit literal(const Literal& l) { return mk_lit(intern(l.atom), !l.positive); }
  Literal to_literal(Lit l) const { return Literal{atoms[lit_atom(l)], !lit_neg(l)}; }
  Clause to_clause(const std::vector<Lit>& ls) const {
    Clause c;
    for (Lit l : ls) c.push_back(to_literal(l));
    return c;
  }
  std::vector<Lit> from_clause(const Clause& c) {
    std::vector<Lit> ls;
    for (auto& l : c) ls.push_back(literal(l));
    return ls;
  }

  // ---------------------------------------------------------------------
  // Clausification

  Lit fresh_aux() { return mk_lit(intern(BoolAtom{next_aux++}), false); }

  Lit atom_literal(const Atom& a, bool positive) {
    if (auto* p = std::get_if<PolyAtom>(&a)) {
      if (p->rel == Rel::Le) return mk_lit(intern(PolyAtom{p->f, Rel::Gt}), positive);
      if (p->rel == Rel::Ge) return mk_lit(intern(PolyAtom{p->f, Rel::Lt}), positive);
    }
    return mk_lit(intern(a), !positive);
  }

  /// Literal implying f (with polarity pos), defined by fresh clauses.
  Lit name(const Formula& f, bool pos) {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False: {
        Lit v = fresh_aux();
        if ((f.kind() == Kind::True) != pos) add_clause({lit_not(v)}, false);
        return v;
      }
      case Kind::Atom: return atom_literal(f.as_atom(), pos);
      case Kind::Not: return name(f.children()[0], !pos);
      case Kind::And:
      case Kind::Or: {
        std::vector<Lit> kids;
        for (auto& c : f.children()) kids.push_back(name(c, pos));
        Lit v = fresh_aux();
        bool conj = (f.kind() == Kind::And) == pos;
        if (conj) {
          for (Lit k : kids) add_clause({lit_not(v), k}, false);
        } else {
          kids.insert(kids.begin(), lit_not(v));
          add_clause(kids, false);
        }
        return v;
      }
    }
    return fresh_aux();
  }

  void assert_top(const Formula& f, bool pos) {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False:
        if ((f.kind() == Kind::True) != pos) trivially_unsat = true;
        return;
      case Kind::Atom: add_clause({atom_literal(f.as_atom(), pos)}, false); return;
      case Kind::Not: assert_top(f.children()[0], !pos); return;
      case Kind::And:
      case Kind::Or: {
        bool conj = (f.kind() == Kind::And) == pos;
        if (conj) {
          for (auto& c : f.children()) assert_top(c, pos);
        } else {
          std::vector<Lit> lits;
          for (auto& c : f.children()) lits.push_back(name(c, pos));
          add_clause(lits, false);
        }
        return;
      }
    }
  }

  ClauseId add_clause(std::vector<Lit> lits, bool learned) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    ClauseId id = static_cast<ClauseId>(clauses.size());
    ClauseData c;
    c.lits = std::move(lits);
    c.learned = learned;
    for (Lit l : c.lits) {
      atom_clauses[lit_atom(l)].push_back(id);
      if (std::holds_alternative<RootAtom>(atoms[lit_atom(l)])) c.has_root = true;
    }
    clauses.push_back(std::move(c));
    in_queue.push_back(0);
    if (started) enqueue(id);
    return id;
  }

  // ---------------------------------------------------------------------
  // Trail and values

  [[nodiscard]] int num_levels() const { return static_cast<int>(vars.size()); }

  bool evaluable(AtomId a) const { return atom_level[a] >= 0 && atom_level[a] < stage; }

  bool eval(AtomId a) {
    int l = atom_level[a];
    if (eval_stamp[a] != level_stamp[l]) {
      eval_val[a] = eval_real_atom(atoms[a], reals);
      eval_stamp[a] = level_stamp[l];
    }
    return eval_val[a];
  }

  Tri atom_now(AtomId a) {
    if (atom_value[a] != Tri::Undef) return atom_value[a];
    if (evaluable(a)) return tri(eval(a));
    return Tri::Undef;
  }

  Tri lit_value(Lit l) {
    Tri t = atom_now(lit_atom(l));
    return lit_neg(l) ? tri_not(t) : t;
  }

  /// Trail position at which the literal became false, INT_MAX if it is not.
  int false_pos(Lit l) {
    AtomId a = lit_atom(l);
    bool want = lit_neg(l);  // atom value that falsifies l
    int best = INT_MAX;
    if (atom_value[a] != Tri::Undef && (atom_value[a] == Tri::True) == want) best = atom_pos[a];
    if (evaluable(a) && eval(a) == want) best = std::min(best, level_pos[atom_level[a]]);
    return best;
  }

  void enqueue(ClauseId c) {
    if (in_queue[c] || clauses[c].deleted) return;
    in_queue[c] = 1;
    queue.push_back(c);
  }

  void enqueue_atom(AtomId a) {
    for (ClauseId c : atom_clauses[a]) enqueue(c);
  }

  void assign_bool(AtomId a, bool value, Reason reason, ClauseId clause) {
    TrailEntry e;
    e.atom = atoms[a];
    e.value = value;
    e.reason = reason;
    atom_value[a] = tri(value);
    atom_pos[a] = static_cast<int>(trail.size());
    trail.push_back(std::move(e));
    trail_atom.push_back(a);
    trail_reason.push_back(clause);
    if (atom_level[a] >= 0) ++level_version[atom_level[a]];
    enqueue_atom(a);
  }

  void assign_real(const AlgebraicNumber& value, Reason reason) {
    int l = stage;
    Var x = vars[l];
    TrailEntry e;
    e.is_real = true;
    e.var = x;
    e.reason = reason;
    level_pos[l] = static_cast<int>(trail.size());
    level_stamp[l] = ++stamp_counter;
    reals.insert_or_assign(x, value);
    trail.push_back(std::move(e));
    trail_atom.push_back(0);
    trail_reason.push_back(0);
    ++stage;
    for (AtomId a : level_atoms[l]) {
      enqueue_atom(a);
      if (atom_value[a] != Tri::Undef && !pending_conflict && tri(eval(a)) != atom_value[a])
        pending_conflict = std::vector<Lit>{mk_lit(a, false), mk_lit(a, true)};
    }
  }

  void pop() {
    const TrailEntry& e = trail.back();
    if (e.is_real) {
      --stage;
      reals.erase(e.var);
      level_pos[stage] = -1;
      level_stamp[stage] = 0;
      for (AtomId a : level_atoms[stage]) enqueue_atom(a);
    } else {
      AtomId a = trail_atom.back();
      atom_value[a] = Tri::Undef;
      atom_pos[a] = -1;
      if (atom_level[a] >= 0) ++level_version[atom_level[a]];
      enqueue_atom(a);
    }
    trail.pop_back();
    trail_atom.pop_back();
    trail_reason.pop_back();
    pending_conflict.reset();
  }

  // ---------------------------------------------------------------------
  // Feasible sets

  std::uint64_t lower_epoch(int level) const { return level > 0 ? level_stamp[level - 1] : 1; }

  /// Values of the stage variable satisfying the atom.
  const IntervalSet& atom_set(AtomId a) {
    int l = atom_level[a];
    std::uint64_t ep = lower_epoch(l);
    if (set_stamp[a] == ep) return set_cache[a];
    Var x = vars[l];
    IntervalSet s;
    if (auto* p = std::get_if<PolyAtom>(&atoms[a])) {
      auto rr = roots_at(p->f, x, reals);
      if (rr.nullified) {
        s = holds(p->rel, 0) ? IntervalSet::all() : IntervalSet::none();
      } else {
        const auto& r = rr.roots;
        std::size_t k = r.size();
        // Segments: open gap 0, root 0, gap 1, ..., root k-1, gap k.
        std::vector<char> in(2 * k + 1);
        RealAssignment m = reals;
        for (std::size_t i = 0; i <= k; ++i) {
          Rational q;
          if (k == 0)
            q = 0;
          else if (i == 0)
            q = Rational(floor(r[0]) - 1);
          else if (i == k)
            q = Rational(ceil(r[k - 1]) + 1);
          else
            q = rational_between(r[i - 1], r[i]);
          m[x] = AlgebraicNumber(q);
          in[2 * i] = holds(p->rel, sign_at(p->f, m));
          if (i < k) in[2 * i + 1] = holds(p->rel, 0);
        }
        std::vector<Interval> pieces;
        std::size_t i = 0;
        while (i < in.size()) {
          if (!in[i]) {
            ++i;
            continue;
          }
          std::size_t j = i;
          while (j + 1 < in.size() && in[j + 1]) ++j;
          Interval iv;
          if (i > 0) iv.lo = Endpoint{r[(i - 1) / 2], i % 2 == 1};
          if (j + 1 < in.size()) iv.hi = Endpoint{r[j / 2], j % 2 == 1};
          pieces.push_back(std::move(iv));
          i = j + 1;
        }
        s = IntervalSet::from_sorted(std::move(pieces));
      }
    } else {
      auto& ra = std::get<RootAtom>(atoms[a]);
      if (ra.x != x) throw std::logic_error("root constraint not on its top variable");
      auto rr = roots_at(ra.f, x, reals);
      if (rr.nullified || rr.roots.size() < ra.k) {
        s = IntervalSet::none();
      } else {
        const auto& r = rr.roots[ra.k - 1];
        switch (ra.rel) {
          case Rel::Lt: s = IntervalSet::below(r, false); break;
          case Rel::Le: s = IntervalSet::below(r, true); break;
          case Rel::Eq: s = IntervalSet::point(r); break;
          case Rel::Ge: s = IntervalSet::above(r, true); break;
          case Rel::Gt: s = IntervalSet::above(r, false); break;
        }
      }
    }
    set_cache[a] = std::move(s);
    set_stamp[a] = ep;
    return set_cache[a];
  }

  IntervalSet lit_set(AtomId a, bool value) {
    const IntervalSet& s = atom_set(a);
    return value ? s : s.complement();
  }

  /// Constraints currently restricting the stage variable.
  std::vector<std::pair<AtomId, bool>> stage_constraints() {
    std::vector<std::pair<AtomId, bool>> out;
    if (stage >= num_levels()) return out;
    for (AtomId a : level_atoms[stage])
      if (atom_value[a] != Tri::Undef) out.emplace_back(a, atom_value[a] == Tri::True);
    std::sort(out.begin(), out.end(), [this](auto& p, auto& q) { return atom_pos[p.first] < atom_pos[q.first]; });
    return out;
  }

  IntervalSet feasible() {
    if (stage >= num_levels()) return IntervalSet::all();
    std::uint64_t ep = lower_epoch(stage);
    if (feasible_level == stage && feasible_epoch == ep && feasible_version == level_version[stage])
      return feasible_cache;
    IntervalSet s = IntervalSet::all();
    for (auto [a, v] : stage_constraints()) {
      s = s.intersect(lit_set(a, v));
      if (s.empty()) break;
    }
    feasible_level = stage;
    feasible_epoch = ep;
    feasible_version = level_version[stage];
    feasible_cache = s;
    return s;
  }

  std::vector<Lit> explain() {
    auto cs = stage_constraints();
    // Deletion-based minimal infeasible core.
    std::vector<char> keep(cs.size(), 1);
    for (std::size_t i = cs.size(); i-- > 0;) {
      keep[i] = 0;
      IntervalSet s = IntervalSet::all();
      for (std::size_t j = 0; j < cs.size() && !s.empty(); ++j)
        if (keep[j]) s = s.intersect(lit_set(cs[j].first, cs[j].second));
      if (!s.empty()) keep[i] = 1;
    }
    std::vector<Lit> clause;
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      if (!keep[i]) continue;
      clause.push_back(mk_lit(cs[i].first, cs[i].second));
      const Atom& at = atoms[cs[i].first];
      if (auto* p = std::get_if<PolyAtom>(&at)) polys.push_back(p->f);
      if (auto* r = std::get_if<RootAtom>(&at)) polys.push_back(r->f);
    }
    CellOptions opts;
    opts.project_only = vars[stage];
    RealAssignment lower;
    for (int l = 0; l < stage; ++l) lower.emplace(vars[l], reals.at(vars[l]));
    auto cell = construct_cell(polys, lower, VarOrder(vars), opts);
    for (auto& a : cell.atoms()) clause.push_back(mk_lit(intern(a), true));
    return clause;
  }

  // ---------------------------------------------------------------------
  // Search

  std::optional<std::vector<Lit>> process(ClauseId c) {
    const auto& lits = clauses[c].lits;
    int undet = 0;
    Lit last = 0;
    for (Lit l : lits) {
      Tri t = lit_value(l);
      if (t == Tri::True) return std::nullopt;
      if (t == Tri::Undef) {
        ++undet;
        last = l;
      }
    }
    if (undet == 0) return lits;
    if (undet == 1) {
      assign_bool(lit_atom(last), !lit_neg(last), Reason::Propagation, c);
      ++stats.propagations;
    }
    return std::nullopt;
  }

  std::optional<std::vector<Lit>> propagate() {
    if (trivially_unsat) return std::vector<Lit>{};
    while (true) {
      if (pending_conflict) return pending_conflict;
      while (!queue.empty()) {
        ClauseId c = queue.back();
        queue.pop_back();
        in_queue[c] = 0;
        if (clauses[c].deleted) continue;
        if (auto conflict = process(c)) return conflict;
        if (pending_conflict) return pending_conflict;
      }
      if (stage < num_levels() && feasible().empty()) return explain();
      if (queue.empty()) return std::nullopt;
    }
  }

  ClauseId learn(std::vector<Lit> lits) {
    ++stats.learned;
    return add_clause(std::move(lits), true);
  }

  /// Resolves c on the false literal l with the reason clause containing ~l.
  void resolve(std::vector<Lit>& c, Lit l, ClauseId reason) {
    std::vector<Lit> out;
    for (Lit k : c)
      if (k != l) out.push_back(k);
    for (Lit k : clauses[reason].lits)
      if (k != lit_not(l)) out.push_back(k);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    c = std::move(out);
  }

  std::pair<std::vector<Lit>, bool> analyze(std::vector<Lit> c) {
    while (true) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      if (c.empty()) return {c, true};
      int top = -1;
      for (Lit l : c) {
        int p = false_pos(l);
        if (p == INT_MAX) throw std::logic_error("analyze: literal is not false");
        top = std::max(top, p);
      }
      while (static_cast<int>(trail.size()) > top + 1) pop();
      const TrailEntry& e = trail[top];
      if (e.reason == Reason::ModelDecision) return {c, true};
      if (!e.is_real && e.reason == Reason::Propagation) {
        Lit pivot = mk_lit(trail_atom[top], e.value);  // the literal made false
        ClauseId reason = trail_reason[top];
        pop();
        resolve(c, pivot, reason);
        continue;
      }
      // A decision: undoing it leaves the learned clause unit or open.
      pop();
      learn(c);
      return {c, false};
    }
  }

  std::vector<Lit> analyze_final(std::vector<Lit> c) {
    while (true) {
      int best = -1;
      Lit pivot = 0;
      for (Lit l : c) {
        AtomId a = lit_atom(l);
        if (atom_value[a] == Tri::Undef) continue;
        if (trail[atom_pos[a]].reason != Reason::Propagation) continue;
        bool want = lit_neg(l);
        if ((atom_value[a] == Tri::True) != want) continue;
        if (evaluable(a) && eval(a) == want) continue;
        if (atom_pos[a] > best) {
          best = atom_pos[a];
          pivot = l;
        }
      }
      if (best < 0) break;
      resolve(c, pivot, trail_reason[best]);
    }
    return c;
  }

  void start(const Assignment& model) {
    while (!trail.empty()) pop();
    pending_conflict.reset();
    model_clash.reset();
    m0 = model;
    // Effective order: model reals first, then the rest in the base order.
    std::vector<Var> mreals, others;
    for (auto& [v, val] : model.reals()) mreals.push_back(v);
    base_order.sort(mreals);
    std::unordered_map<Var, int> seen;
    for (Var v : mreals) seen.emplace(v, 0);
    for (AtomId a = 0; a < atoms.size(); ++a)
      for (Var v : atom_reals[a])
        if (seen.emplace(v, 0).second) others.push_back(v);
    base_order.sort(others);
    std::vector<Var> order = mreals;
    order.insert(order.end(), others.begin(), others.end());
    if (started && order != previous_order) {
      for (auto& c : clauses)
        if (c.learned && c.has_root) c.deleted = true;
    }
    previous_order = order;
    vars = order;
    model_reals = mreals.size();
    var_level.clear();
    for (std::size_t i = 0; i < vars.size(); ++i) var_level.emplace(vars[i], static_cast<int>(i));
    level_atoms.assign(vars.size(), {});
    level_pos.assign(vars.size(), -1);
    level_stamp.assign(vars.size(), 0);
    level_version.assign(vars.size(), 0);
    started = true;
    for (AtomId a = 0; a < atoms.size(); ++a) {
      atom_level[a] = compute_atom_level(a);
      if (atom_level[a] >= 0) level_atoms[atom_level[a]].push_back(a);
    }
    std::fill(eval_stamp.begin(), eval_stamp.end(), 0);
    std::fill(set_stamp.begin(), set_stamp.end(), 0);
    feasible_level = -1;
    stage = 0;
    model_bools.clear();
    for (auto& [v, b] : model.bools()) model_bools.push_back(intern(BoolAtom{v}));
    queue.clear();
    std::fill(in_queue.begin(), in_queue.end(), 0);
    for (ClauseId c = 0; c < clauses.size(); ++c) enqueue(c);
  }

  /// Undetermined literal of an unsatisfied clause whose atom lives at or
  /// below the stage.
  std::optional<Lit> pick_literal() {
    for (ClauseId c = 0; c < clauses.size(); ++c) {
      const auto& cl = clauses[c];
      if (cl.deleted) continue;
      std::optional<Lit> open;
      bool sat = false;
      for (Lit l : cl.lits) {
        Tri t = lit_value(l);
        if (t == Tri::True) {
          sat = true;
          break;
        }
        if (t == Tri::Undef && !open && atom_level[lit_atom(l)] <= stage) open = l;
      }
      if (!sat && open) return open;
    }
    return std::nullopt;
  }

  bool decide_model_var() {
    for (std::size_t i = 0; i < model_bools.size(); ++i) {
      AtomId a = model_bools[i];
      Var v = std::get<BoolAtom>(atoms[a]).v;
      bool want = m0.bools().at(v);
      if (atom_value[a] != Tri::Undef) {
        // Already implied the other way: its reason clause is false under m0.
        if ((atom_value[a] == Tri::True) != want) {
          model_clash = clauses[trail_reason[atom_pos[a]]].lits;
          return false;
        }
        continue;
      }
      assign_bool(a, want, Reason::ModelDecision, 0);
      return true;
    }
    if (static_cast<std::size_t>(stage) < model_reals) {
      assign_real(m0.reals().at(vars[stage]), Reason::ModelDecision);
      return true;
    }
    return false;
  }

  bool limit_reached() const {
    if (limits.max_conflicts && stats.conflicts >= limits.max_conflicts) return true;
    if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline) return true;
    return false;
  }

  Assignment model() const {
    Assignment m = m0;
    for (auto& [v, a] : reals) m.set(v, a);
    for (AtomId a = 0; a < atoms.size(); ++a) {
      auto* b = std::get_if<BoolAtom>(&atoms[a]);
      if (!b || b->v >= kAuxBoolBase) continue;
      m.set(b->v, atom_value[a] == Tri::True);
    }
    return m;
  }

  void search(CheckResult& res) {
    while (true) {
      if (limit_reached()) {
        res.status = Status::Unknown;
        break;
      }
      if (auto conflict = propagate()) {
        ++stats.conflicts;
        auto [c, final] = analyze(std::move(*conflict));
        if (final) {
          res.status = Status::Unsat;
          res.interpolant = to_clause(analyze_final(std::move(c)));
          break;
        }
        continue;
      }
      if (decide_model_var()) continue;
      if (model_clash) {
        res.status = Status::Unsat;
        res.interpolant = to_clause(analyze_final(std::move(*model_clash)));
        model_clash.reset();
        break;
      }
      if (auto l = pick_literal()) {
        assign_bool(lit_atom(*l), !lit_neg(*l), Reason::Decision, 0);
        ++stats.decisions;
        continue;
      }
      if (stage < num_levels()) {
        assign_real(feasible().pick(), Reason::Decision);
        ++stats.decisions;
        continue;
      }
      res.status = Status::Sat;
      res.model = model();
      break;
    }
  }

  CheckResult check(const Assignment& model_in) {
    ++stats.checks;
    start(model_in);
    CheckResult res;
    try {
      DeadlineScope scope(limits.deadline);
      search(res);
    } catch (const Interrupted&) {
      res = CheckResult{};
      res.status = Status::Unknown;
    }
    if (res.status == Status::Sat) {
      for (auto& f : assertions)
        if (evaluate(f, res.model) != Tri::True) throw std::logic_error("model does not satisfy an assertion");
    } else if (res.status == Status::Unsat) {
      if (evaluate(to_formula(res.interpolant), model_in) != Tri::False)
        throw std::logic_error("interpolant is not false under the input model");
    }
    return res;
  }
};

Solver::Solver() : impl_(std::make_unique<Impl>()) {}
Solver::Solver(VarOrder order) : Solver() { impl_->base_order = std::move(order); }
Solver::~Solver() = default;

void Solver::set_order(VarOrder order) { impl_->base_order = std::move(order); }
const VarOrder& Solver::order() const { return impl_->base_order; }
void Solver::set_limits(const SolverLimits& limits) { impl_->limits = limits; }
const Statistics& Solver::stats() const { return impl_->stats; }
const std::vector<Formula>& Solver::assertions() const { return impl_->assertions; }

void Solver::assert_formula(const Formula& f) {
  impl_->assertions.push_back(f);
  impl_->assert_top(f, true);
}

CheckResult Solver::check() { return impl_->check({}); }
CheckResult Solver::check_modulo(const Assignment& m0) { return impl_->check(m0); }

void Solver::start(const Assignment& m0) { impl_->start(m0); }

std::optional<Clause> Solver::propagate() {
  auto c = impl_->propagate();
  if (!c) return std::nullopt;
  return impl_->to_clause(*c);
}

void Solver::decide(const Atom& a, bool value) {
  AtomId id = impl_->intern(a);
  if (impl_->atom_value[id] != Tri::Undef) throw std::logic_error("decide: atom already assigned");
  impl_->assign_bool(id, value, Reason::Decision, 0);
  ++impl_->stats.decisions;
}

std::optional<Clause> Solver::decide(Var x, std::optional<AlgebraicNumber> value, bool model) {
  Impl& s = *impl_;
  int l = s.level_of_var(x);
  if (l != s.stage) throw std::logic_error("decide: variable is not the stage variable");
  s.assign_real(value ? *value : s.feasible().pick(), model ? Reason::ModelDecision : Reason::Decision);
  ++s.stats.decisions;
  if (s.pending_conflict) return s.to_clause(*s.pending_conflict);
  return std::nullopt;
}

std::pair<Clause, bool> Solver::analyze_conflict(const Clause& conflict) {
  auto [c, final] = impl_->analyze(impl_->from_clause(conflict));
  return {impl_->to_clause(c), final};
}

Clause Solver::analyze_final(const Clause& conflict) {
  return impl_->to_clause(impl_->analyze_final(impl_->from_clause(conflict)));
}

std::optional<Clause> Solver::explain_unit_conflict() {
  Impl& s = *impl_;
  if (s.stage >= s.num_levels() || !s.feasible().empty()) return std::nullopt;
  return s.to_clause(s.explain());
}

bool Solver::can_evaluate(const Atom& a, bool value) const {
  Impl& s = *impl_;
  auto it = s.atom_index.find(a);
  if (it == s.atom_index.end() || !s.started) return evaluate(a, trail_assignment()) == tri(value);
  AtomId id = it->second;
  if (s.atom_value[id] == tri(value)) return true;
  return s.evaluable(id) && s.eval(id) == value;
}

std::vector<Solver::TrailEntry> Solver::trail() const { return impl_->trail; }

Assignment Solver::trail_assignment() const {
  Assignment m;
  for (auto& [v, a] : impl_->reals) m.set(v, a);
  for (auto& e : impl_->trail)
    if (!e.is_real)
      if (auto* b = std::get_if<BoolAtom>(&e.atom)) m.set(b->v, e.value);
  return m;
}

IntervalSet Solver::feasible_set() const { return impl_->feasible(); }

std::optional<Var> Solver::stage_var() const {
  if (impl_->stage >= impl_->num_levels()) return std::nullopt;
  return impl_->vars[impl_->stage];
}

}  // namespace nra
