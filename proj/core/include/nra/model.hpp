#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nra/poly.hpp"
#include "nra/realalg.hpp"

namespace nra {

enum class Sort { Real, Bool };

/// Names and sorts of declared variables. Ids are dense, starting at 0.
class VarTable {
 public:
  Var declare(const std::string& name, Sort sort);
  /// Declares a variable with a name derived from `base` that is not taken yet.
  Var fresh(const std::string& base, Sort sort);
  [[nodiscard]] std::optional<Var> lookup(const std::string& name) const;
  [[nodiscard]] const std::string& name(Var v) const { return names_.at(v); }
  [[nodiscard]] Sort sort(Var v) const { return sorts_.at(v); }
  [[nodiscard]] std::size_t size() const { return names_.size(); }
  [[nodiscard]] VarNamer namer() const;

 private:
  std::vector<std::string> names_;
  std::vector<Sort> sorts_;
  std::map<std::string, Var> index_;
};

enum class Rel { Lt, Le, Eq, Ge, Gt };

/// True iff `cmp` (a three-way comparison result) satisfies the relation.
bool holds(Rel r, int cmp);
/// Relation obtained by swapping the sides: a r b iff b mirror(r) a.
Rel mirror(Rel r);
const char* rel_symbol(Rel r);

struct BoolAtom {
  Var v;
};

/// f rel 0.
struct PolyAtom {
  Polynomial f;
  Rel rel;
};

/// x rel root(f, k, x): compares x with the k-th real root of f in x after
/// substituting the other variables. False when that root does not exist.
struct RootAtom {
  Var x;
  Rel rel;
  Polynomial f;
  unsigned k;
};

using Atom = std::variant<BoolAtom, PolyAtom, RootAtom>;

bool operator==(const Atom& a, const Atom& b);
inline bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
std::size_t hash_atom(const Atom& a);
/// Variables the atom mentions.
std::vector<Var> atom_vars(const Atom& a);

struct AtomHash {
  std::size_t operator()(const Atom& a) const { return hash_atom(a); }
};

enum class Kind { True, False, Atom, Not, And, Or };

/// Immutable formula tree with shared subterms.
class Formula {
 public:
  Formula();  // true

  static Formula top();
  static Formula bottom();
  static Formula atom(Atom a);
  /// Normalized polynomial constraint f rel 0: f is made primitive with a
  /// positive leading coefficient; constant constraints fold to true/false.
  static Formula constraint(const Polynomial& f, Rel rel);
  static Formula boolean(Var v) { return atom(BoolAtom{v}); }
  static Formula negation(const Formula& f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);

  [[nodiscard]] Kind kind() const;
  [[nodiscard]] const Atom& as_atom() const;
  [[nodiscard]] const std::vector<Formula>& children() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Formula operator!(const Formula& f);
Formula operator&&(const Formula& a, const Formula& b);
Formula operator||(const Formula& a, const Formula& b);

/// Literal over an arbitrary atom.
struct Literal {
  Atom atom;
  bool positive = true;
};
bool operator==(const Literal& a, const Literal& b);
using Clause = std::vector<Literal>;

Formula to_formula(const Literal& l);
Formula to_formula(const Clause& c);
Formula to_formula(const std::vector<Clause>& cnf);

std::set<Var> formula_vars(const Formula& f);
/// Polynomials of all polynomial and root atoms.
std::vector<Polynomial> formula_polys(const Formula& f);
Formula rename(const Formula& f, const std::map<Var, Var>& renaming);
/// Replaces every occurrence of x by the polynomial e.
Formula substitute(const Formula& f, Var x, const Polynomial& e);

/// Value of a variable.
using Value = std::variant<bool, AlgebraicNumber>;

/// Partial, type-consistent assignment of Bool and Real variables.
class Assignment {
 public:
  void set(Var v, bool b);
  void set(Var v, const AlgebraicNumber& a);
  void set(Var v, const Value& val);
  void erase(Var v);
  [[nodiscard]] bool contains(Var v) const { return bools_.count(v) || reals_.count(v); }
  [[nodiscard]] std::optional<Value> get(Var v) const;
  [[nodiscard]] const std::map<Var, bool>& bools() const { return bools_; }
  [[nodiscard]] const RealAssignment& reals() const { return reals_; }
  [[nodiscard]] bool empty() const { return bools_.empty() && reals_.empty(); }
  [[nodiscard]] std::vector<Var> vars() const;

  [[nodiscard]] Assignment restricted(const std::set<Var>& keep) const;
  /// M1 ∪ M2, or nullopt when they disagree on a shared variable.
  static std::optional<Assignment> combine(const Assignment& a, const Assignment& b);

  friend bool operator==(const Assignment& a, const Assignment& b);

 private:
  std::map<Var, bool> bools_;
  RealAssignment reals_;
};

enum class Tri { False, True, Undef };
Tri tri_not(Tri t);
inline Tri tri(bool b) { return b ? Tri::True : Tri::False; }

Tri evaluate(const Atom& a, const Assignment& m);
Tri evaluate(const Literal& l, const Assignment& m);
Tri evaluate(const Formula& f, const Assignment& m);

/// Printers. Constraints print as (rel lhs rhs), root atoms as
/// (rel x (root-of <f> k x)).
std::string to_smtlib(const Atom& a, const VarNamer& namer = default_var_name);
std::string to_smtlib(const Literal& l, const VarNamer& namer = default_var_name);
std::string to_smtlib(const Formula& f, const VarNamer& namer = default_var_name);
std::string to_smtlib(const Value& v);

}  // namespace nra
