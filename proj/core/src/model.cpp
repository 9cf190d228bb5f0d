#include "nra/model.hpp"

#include <algorithm>

namespace nra {

// ---------------------------------------------------------------------------
// VarTable

Var VarTable::declare(const std::string& name, Sort sort) {
  if (index_.count(name)) throw PolyError("variable already declared: " + name);
  Var v = static_cast<Var>(names_.size());
  names_.push_back(name);
  sorts_.push_back(sort);
  index_.emplace(name, v);
  return v;
}

Var VarTable::fresh(const std::string& base, Sort sort) {
  if (!index_.count(base)) return declare(base, sort);
  for (std::size_t i = 1;; ++i) {
    std::string n = base + "!" + std::to_string(i);
    if (!index_.count(n)) return declare(n, sort);
  }
}

std::optional<Var> VarTable::lookup(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarNamer VarTable::namer() const {
  return [this](Var v) { return v < names_.size() ? names_[v] : default_var_name(v); };
}

// ---------------------------------------------------------------------------
// Relations and atoms

bool holds(Rel r, int cmp) {
  switch (r) {
    case Rel::Lt: return cmp < 0;
    case Rel::Le: return cmp <= 0;
    case Rel::Eq: return cmp == 0;
    case Rel::Ge: return cmp >= 0;
    case Rel::Gt: return cmp > 0;
  }
  return false;
}

Rel mirror(Rel r) {
  switch (r) {
    case Rel::Lt: return Rel::Gt;
    case Rel::Le: return Rel::Ge;
    case Rel::Eq: return Rel::Eq;
    case Rel::Ge: return Rel::Le;
    case Rel::Gt: return Rel::Lt;
  }
  return r;
}

const char* rel_symbol(Rel r) {
  switch (r) {
    case Rel::Lt: return "<";
    case Rel::Le: return "<=";
    case Rel::Eq: return "=";
    case Rel::Ge: return ">=";
    case Rel::Gt: return ">";
  }
  return "?";
}

bool operator==(const Atom& a, const Atom& b) {
  if (a.index() != b.index()) return false;
  if (auto* x = std::get_if<BoolAtom>(&a)) return x->v == std::get<BoolAtom>(b).v;
  if (auto* x = std::get_if<PolyAtom>(&a)) {
    auto& y = std::get<PolyAtom>(b);
    return x->rel == y.rel && x->f == y.f;
  }
  auto& x = std::get<RootAtom>(a);
  auto& y = std::get<RootAtom>(b);
  return x.x == y.x && x.rel == y.rel && x.k == y.k && x.f == y.f;
}

std::size_t hash_atom(const Atom& a) {
  std::size_t h = a.index() * 0x9e3779b97f4a7c15ull;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BoolAtom>) {
          mix(x.v);
        } else if constexpr (std::is_same_v<T, PolyAtom>) {
          mix(x.f.hash());
          mix(static_cast<std::size_t>(x.rel));
        } else {
          mix(x.x);
          mix(x.f.hash());
          mix(static_cast<std::size_t>(x.rel));
          mix(x.k);
        }
      },
      a);
  return h;
}

std::vector<Var> atom_vars(const Atom& a) {
  if (auto* b = std::get_if<BoolAtom>(&a)) return {b->v};
  if (auto* p = std::get_if<PolyAtom>(&a)) return p->f.vars();
  auto& r = std::get<RootAtom>(a);
  auto vs = r.f.vars();
  if (std::find(vs.begin(), vs.end(), r.x) == vs.end()) vs.push_back(r.x);
  std::sort(vs.begin(), vs.end());
  return vs;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  Atom atom;
  std::vector<Formula> kids;
};

namespace {

const std::shared_ptr<const Formula::Node>& true_node() {
  static const auto n = std::make_shared<const Formula::Node>(Formula::Node{Kind::True, BoolAtom{0}, {}});
  return n;
}
const std::shared_ptr<const Formula::Node>& false_node() {
  static const auto n = std::make_shared<const Formula::Node>(Formula::Node{Kind::False, BoolAtom{0}, {}});
  return n;
}

}  // namespace

Formula::Formula() : node_(true_node()) {}
Formula Formula::top() { return Formula(true_node()); }
Formula Formula::bottom() { return Formula(false_node()); }

Formula Formula::atom(Atom a) { return Formula(std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}})); }

Formula Formula::constraint(const Polynomial& f, Rel rel) {
  if (f.is_constant()) return holds(rel, sgn(f.constant_term())) ? top() : bottom();
  if (f.leading_integer() < 0) rel = mirror(rel);
  return atom(PolyAtom{primitive(f), rel});
}

Formula Formula::negation(const Formula& f) {
  switch (f.kind()) {
    case Kind::True: return bottom();
    case Kind::False: return top();
    case Kind::Not: return f.children()[0];
    default: return Formula(std::make_shared<const Node>(Node{Kind::Not, BoolAtom{0}, {f}}));
  }
}

namespace {

std::vector<Formula> flatten(std::vector<Formula> fs, Kind kind, Kind unit) {
  std::vector<Formula> out;
  for (auto& f : fs) {
    if (f.kind() == unit) continue;
    if (f.kind() == kind)
      out.insert(out.end(), f.children().begin(), f.children().end());
    else
      out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

Formula Formula::conjunction(std::vector<Formula> fs) {
  fs = flatten(std::move(fs), Kind::And, Kind::True);
  for (auto& f : fs)
    if (f.kind() == Kind::False) return bottom();
  if (fs.empty()) return top();
  if (fs.size() == 1) return fs[0];
  return Formula(std::make_shared<const Node>(Node{Kind::And, BoolAtom{0}, std::move(fs)}));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  fs = flatten(std::move(fs), Kind::Or, Kind::False);
  for (auto& f : fs)
    if (f.kind() == Kind::True) return top();
  if (fs.empty()) return bottom();
  if (fs.size() == 1) return fs[0];
  return Formula(std::make_shared<const Node>(Node{Kind::Or, BoolAtom{0}, std::move(fs)}));
}

Kind Formula::kind() const { return node_->kind; }
const Atom& Formula::as_atom() const { return node_->atom; }
const std::vector<Formula>& Formula::children() const { return node_->kids; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Kind::Atom) return a.as_atom() == b.as_atom();
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i)
    if (a.children()[i] != b.children()[i]) return false;
  return true;
}

Formula operator!(const Formula& f) { return Formula::negation(f); }
Formula operator&&(const Formula& a, const Formula& b) { return Formula::conjunction({a, b}); }
Formula operator||(const Formula& a, const Formula& b) { return Formula::disjunction({a, b}); }

bool operator==(const Literal& a, const Literal& b) { return a.positive == b.positive && a.atom == b.atom; }

Formula to_formula(const Literal& l) {
  Formula a = Formula::atom(l.atom);
  return l.positive ? a : !a;
}

Formula to_formula(const Clause& c) {
  std::vector<Formula> fs;
  for (auto& l : c) fs.push_back(to_formula(l));
  return Formula::disjunction(std::move(fs));
}

Formula to_formula(const std::vector<Clause>& cnf) {
  std::vector<Formula> fs;
  for (auto& c : cnf) fs.push_back(to_formula(c));
  return Formula::conjunction(std::move(fs));
}

namespace {

template <class Fn>
void for_each_atom(const Formula& f, Fn&& fn) {
  if (f.kind() == Kind::Atom) {
    fn(f.as_atom());
    return;
  }
  for (auto& c : f.children()) for_each_atom(c, fn);
}

template <class Fn>
Formula map_atoms(const Formula& f, Fn&& fn) {
  switch (f.kind()) {
    case Kind::True:
    case Kind::False: return f;
    case Kind::Atom: return fn(f.as_atom());
    case Kind::Not: return !map_atoms(f.children()[0], fn);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (auto& c : f.children()) kids.push_back(map_atoms(c, fn));
      return f.kind() == Kind::And ? Formula::conjunction(std::move(kids)) : Formula::disjunction(std::move(kids));
    }
  }
  return f;
}

}  // namespace

std::set<Var> formula_vars(const Formula& f) {
  std::set<Var> vs;
  for_each_atom(f, [&](const Atom& a) {
    for (Var v : atom_vars(a)) vs.insert(v);
  });
  return vs;
}

std::vector<Polynomial> formula_polys(const Formula& f) {
  std::vector<Polynomial> ps;
  for_each_atom(f, [&](const Atom& a) {
    if (auto* p = std::get_if<PolyAtom>(&a)) ps.push_back(p->f);
    if (auto* r = std::get_if<RootAtom>(&a)) ps.push_back(r->f);
  });
  return ps;
}

Formula rename(const Formula& f, const std::map<Var, Var>& renaming) {
  auto rv = [&](Var v) {
    auto it = renaming.find(v);
    return it == renaming.end() ? v : it->second;
  };
  return map_atoms(f, [&](const Atom& a) -> Formula {
    if (auto* b = std::get_if<BoolAtom>(&a)) return Formula::boolean(rv(b->v));
    if (auto* p = std::get_if<PolyAtom>(&a)) return Formula::atom(PolyAtom{nra::rename(p->f, renaming), p->rel});
    auto& r = std::get<RootAtom>(a);
    return Formula::atom(RootAtom{rv(r.x), r.rel, nra::rename(r.f, renaming), r.k});
  });
}

Formula substitute(const Formula& f, Var x, const Polynomial& e) {
  return map_atoms(f, [&](const Atom& a) -> Formula {
    if (auto* p = std::get_if<PolyAtom>(&a)) return Formula::constraint(nra::substitute(p->f, x, e), p->rel);
    if (auto* r = std::get_if<RootAtom>(&a)) {
      if (r->x == x || r->f.contains(x)) throw PolyError("cannot substitute into a root constraint");
    }
    return Formula::atom(a);
  });
}

// ---------------------------------------------------------------------------
// Assignment

void Assignment::set(Var v, bool b) {
  reals_.erase(v);
  bools_[v] = b;
}

void Assignment::set(Var v, const AlgebraicNumber& a) {
  bools_.erase(v);
  reals_.insert_or_assign(v, a);
}

void Assignment::set(Var v, const Value& val) {
  if (auto* b = std::get_if<bool>(&val))
    set(v, *b);
  else
    set(v, std::get<AlgebraicNumber>(val));
}

void Assignment::erase(Var v) {
  bools_.erase(v);
  reals_.erase(v);
}

std::optional<Value> Assignment::get(Var v) const {
  if (auto it = bools_.find(v); it != bools_.end()) return Value(it->second);
  if (auto it = reals_.find(v); it != reals_.end()) return Value(it->second);
  return std::nullopt;
}

std::vector<Var> Assignment::vars() const {
  std::vector<Var> vs;
  for (auto& [v, b] : bools_) vs.push_back(v);
  for (auto& [v, a] : reals_) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  return vs;
}

Assignment Assignment::restricted(const std::set<Var>& keep) const {
  Assignment r;
  for (auto& [v, b] : bools_)
    if (keep.count(v)) r.bools_.emplace(v, b);
  for (auto& [v, a] : reals_)
    if (keep.count(v)) r.reals_.emplace(v, a);
  return r;
}

std::optional<Assignment> Assignment::combine(const Assignment& a, const Assignment& b) {
  Assignment r = a;
  for (auto& [v, x] : b.bools_) {
    if (a.reals_.count(v)) return std::nullopt;
    auto it = a.bools_.find(v);
    if (it != a.bools_.end() && it->second != x) return std::nullopt;
    r.bools_[v] = x;
  }
  for (auto& [v, x] : b.reals_) {
    if (a.bools_.count(v)) return std::nullopt;
    auto it = a.reals_.find(v);
    if (it != a.reals_.end()) {
      if (compare(it->second, x) != 0) return std::nullopt;
      continue;
    }
    r.reals_.emplace(v, x);
  }
  return r;
}

bool operator==(const Assignment& a, const Assignment& b) {
  if (a.bools_ != b.bools_ || a.reals_.size() != b.reals_.size()) return false;
  for (auto& [v, x] : a.reals_) {
    auto it = b.reals_.find(v);
    if (it == b.reals_.end() || compare(it->second, x) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Evaluation

Tri tri_not(Tri t) {
  if (t == Tri::Undef) return t;
  return t == Tri::True ? Tri::False : Tri::True;
}

Tri evaluate(const Atom& a, const Assignment& m) {
  if (auto* b = std::get_if<BoolAtom>(&a)) {
    auto it = m.bools().find(b->v);
    return it == m.bools().end() ? Tri::Undef : tri(it->second);
  }
  for (Var v : atom_vars(a))
    if (!m.reals().count(v)) return Tri::Undef;
  if (auto* p = std::get_if<PolyAtom>(&a)) return tri(holds(p->rel, sign_at(p->f, m.reals())));
  auto& r = std::get<RootAtom>(a);
  auto roots = roots_at(r.f, r.x, m.reals());
  if (roots.nullified || roots.roots.size() < r.k) return Tri::False;
  return tri(holds(r.rel, compare(m.reals().at(r.x), roots.roots[r.k - 1])));
}

Tri evaluate(const Literal& l, const Assignment& m) {
  Tri t = evaluate(l.atom, m);
  return l.positive ? t : tri_not(t);
}

Tri evaluate(const Formula& f, const Assignment& m) {
  switch (f.kind()) {
    case Kind::True: return Tri::True;
    case Kind::False: return Tri::False;
    case Kind::Atom: return evaluate(f.as_atom(), m);
    case Kind::Not: return tri_not(evaluate(f.children()[0], m));
    case Kind::And: {
      Tri r = Tri::True;
      for (auto& c : f.children()) {
        Tri t = evaluate(c, m);
        if (t == Tri::False) return t;
        if (t == Tri::Undef) r = t;
      }
      return r;
    }
    case Kind::Or: {
      Tri r = Tri::False;
      for (auto& c : f.children()) {
        Tri t = evaluate(c, m);
        if (t == Tri::True) return t;
        if (t == Tri::Undef) r = t;
      }
      return r;
    }
  }
  return Tri::Undef;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_smtlib(const Atom& a, const VarNamer& namer) {
  if (auto* b = std::get_if<BoolAtom>(&a)) return namer(b->v);
  if (auto* p = std::get_if<PolyAtom>(&a)) {
    auto [lhs, rhs] = to_smtlib_sides(p->f, namer);
    return std::string("(") + rel_symbol(p->rel) + " " + lhs + " " + rhs + ")";
  }
  auto& r = std::get<RootAtom>(a);
  return std::string("(") + rel_symbol(r.rel) + " " + namer(r.x) + " (root-of " + to_smtlib(r.f, namer) + " " +
         std::to_string(r.k) + " " + namer(r.x) + "))";
}

std::string to_smtlib(const Literal& l, const VarNamer& namer) {
  return l.positive ? to_smtlib(l.atom, namer) : "(not " + to_smtlib(l.atom, namer) + ")";
}

std::string to_smtlib(const Formula& f, const VarNamer& namer) {
  switch (f.kind()) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: return to_smtlib(f.as_atom(), namer);
    case Kind::Not: return "(not " + to_smtlib(f.children()[0], namer) + ")";
    case Kind::And:
    case Kind::Or: {
      std::string s = f.kind() == Kind::And ? "(and" : "(or";
      for (auto& c : f.children()) s += " " + to_smtlib(c, namer);
      return s + ")";
    }
  }
  return "";
}

std::string to_smtlib(const Value& v) {
  if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return to_smtlib(std::get<AlgebraicNumber>(v));
}

}  // namespace nra
