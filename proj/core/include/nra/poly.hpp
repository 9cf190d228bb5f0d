#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace nra {

using Integer = mpz_class;
using Rational = mpq_class;

/// Variable identifier. Sorts and names live in a VarTable; polynomials only
/// carry ids.
using Var = std::uint32_t;

inline constexpr Var kNoVar = static_cast<Var>(-1);

class PolyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown from long-running arithmetic once the deadline installed by the
/// innermost DeadlineScope on this thread has passed.
class Interrupted : public std::runtime_error {
 public:
  Interrupted() : std::runtime_error("deadline reached") {}
};

/// Installs a deadline for arithmetic on the current thread while alive.
/// Nested scopes keep the earlier deadline.
class DeadlineScope {
 public:
  using TimePoint = std::chrono::steady_clock::time_point;
  explicit DeadlineScope(std::optional<TimePoint> deadline);
  ~DeadlineScope();
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

 private:
  std::optional<TimePoint> saved_;
};

/// Throws Interrupted if the current deadline has passed. Reads the clock
/// only every few hundred calls.
void check_deadline();

/// Total order on real variables. Variables not explicitly listed rank above
/// every listed variable, ordered by id.
class VarOrder {
 public:
  VarOrder() = default;
  explicit VarOrder(std::vector<Var> vars);

  /// Rank of `v`; lower rank means lower level in the decomposition.
  [[nodiscard]] std::uint64_t rank(Var v) const;
  [[nodiscard]] bool less(Var a, Var b) const { return rank(a) < rank(b); }
  [[nodiscard]] const std::vector<Var>& vars() const { return vars_; }
  [[nodiscard]] bool contains(Var v) const { return index_.count(v) != 0; }

  /// Appends `v` at the top if it is not already ordered.
  void push_back(Var v);

  /// Sorts `vs` ascending by rank.
  void sort(std::vector<Var>& vs) const;

 private:
  std::vector<Var> vars_;
  std::map<Var, std::size_t> index_;
};

/// Power product, factors sorted by variable id, exponents positive.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(Var v, unsigned exp = 1);
  explicit Monomial(std::vector<std::pair<Var, unsigned>> factors);

  [[nodiscard]] const std::vector<std::pair<Var, unsigned>>& factors() const { return factors_; }
  [[nodiscard]] bool is_one() const { return factors_.empty(); }
  [[nodiscard]] unsigned degree() const;
  [[nodiscard]] unsigned degree(Var v) const;

  [[nodiscard]] Monomial operator*(const Monomial& o) const;
  /// Exact quotient if `o` divides this monomial.
  [[nodiscard]] std::optional<Monomial> divide(const Monomial& o) const;
  [[nodiscard]] Monomial without(Var v) const;
  [[nodiscard]] Monomial gcd(const Monomial& o) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<std::pair<Var, unsigned>> factors_;
};

/// Graded lexicographic term order (higher variable ids more significant).
/// Returns <0, 0, >0.
int compare_grlex(const Monomial& a, const Monomial& b);

/// Multivariate polynomial with arbitrary-precision integer coefficients.
///
/// Terms are kept sorted by descending grlex order with non-zero coefficients,
/// which makes the representation canonical. The recursive view in a chosen
/// variable (the level structure used by projection) is available through
/// `coefficients(x)`.
class Polynomial {
 public:
  using Term = std::pair<Monomial, Integer>;

  Polynomial() = default;
  Polynomial(long c);  // NOLINT(google-explicit-constructor)
  Polynomial(const Integer& c);  // NOLINT(google-explicit-constructor)
  static Polynomial variable(Var v);
  static Polynomial monomial(const Integer& c, Monomial m);
  /// Builds from arbitrary terms (combines duplicates, drops zeros).
  static Polynomial from_terms(std::vector<Term> terms);
  /// Builds sum_i coeffs[i] * x^i.
  static Polynomial from_coefficients(Var x, std::span<const Polynomial> coeffs);

  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }
  [[nodiscard]] bool is_constant() const;
  /// Value of the constant term (0 if absent).
  [[nodiscard]] Integer constant_term() const;
  [[nodiscard]] unsigned degree(Var x) const;
  [[nodiscard]] unsigned total_degree() const;
  [[nodiscard]] std::vector<Var> vars() const;
  [[nodiscard]] bool contains(Var x) const { return degree(x) > 0; }
  /// Highest variable of the polynomial under `order`, kNoVar if constant.
  [[nodiscard]] Var top_var(const VarOrder& order) const;
  /// Coefficients in `x`: result[i] is the coefficient of x^i.
  [[nodiscard]] std::vector<Polynomial> coefficients(Var x) const;
  [[nodiscard]] Polynomial leading_coefficient(Var x) const;
  /// Integer gcd of all coefficients (positive; 0 for the zero polynomial).
  [[nodiscard]] Integer content() const;
  /// Leading (grlex-largest) term's coefficient.
  [[nodiscard]] const Integer& leading_integer() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  [[nodiscard]] Polynomial scaled(const Integer& c) const;
  [[nodiscard]] Polynomial pow(unsigned e) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  /// Arbitrary but fixed total order (used for sets and deterministic output).
  friend bool operator<(const Polynomial& a, const Polynomial& b);
  [[nodiscard]] std::size_t hash() const;

 private:
  std::vector<Term> terms_;
};

enum class ArithOp { Add, Sub, Mul };
Polynomial arith(const Polynomial& f, const Polynomial& g, ArithOp op);

/// Formal partial derivative.
Polynomial derivative(const Polynomial& f, Var x);
/// k-th partial derivative.
Polynomial derivative(const Polynomial& f, Var x, unsigned k);

/// Exact quotient a / b; throws PolyError if b does not divide a.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

/// Divides out the integer content; makes the grlex-leading coefficient
/// positive when `fix_sign` is set.
Polynomial primitive(const Polynomial& f, bool fix_sign = true);

/// Resultant in `x` via the subresultant PRS. Throws if either input has
/// degree 0 in x.
Polynomial resultant(const Polynomial& f, const Polynomial& g, Var x);

/// Discriminant in `x`: (-1)^(n(n-1)/2) res(f, f') / lc(f). For a quadratic
/// a x^2 + b x + c this is b^2 - 4ac. Throws if deg_x(f) < 2.
Polynomial discriminant(const Polynomial& f, Var x);

/// Substitutes rational values. The result equals f(values) multiplied by a
/// positive integer (denominators are cleared), so signs are preserved.
Polynomial substitute(const Polynomial& f, const std::map<Var, Rational>& values);

/// Substitutes a polynomial for a variable.
Polynomial substitute(const Polynomial& f, Var x, const Polynomial& replacement);

/// Renames variables (map entries absent from `renaming` are kept).
Polynomial rename(const Polynomial& f, const std::map<Var, Var>& renaming);

/// Exact value at a total rational point.
Rational evaluate(const Polynomial& f, const std::map<Var, Rational>& values);

/// Splits off monomial content and integer content: returns the primitive
/// non-constant factors (the remaining part plus each variable dividing all
/// terms). Signs are normalized, so this is only meaningful for projection.
std::vector<Polynomial> simple_factors(const Polynomial& f);

/// Name lookup used by printers.
using VarNamer = std::function<std::string(Var)>;
std::string default_var_name(Var v);

/// SMT-LIB style rendering, e.g. (- (* x x) 2).
std::string to_smtlib(const Polynomial& f, const VarNamer& namer = default_var_name);

/// Renders the non-constant part and the negated constant separately, so a
/// constraint f ~ 0 prints as (~ lhs rhs).
std::pair<std::string, std::string> to_smtlib_sides(const Polynomial& f,
                                                    const VarNamer& namer = default_var_name);

std::ostream& operator<<(std::ostream& os, const Polynomial& f);

/// Dense univariate integer polynomial, index = power.
using UPoly = std::vector<Integer>;

/// Converts a polynomial in (at most) `x` to dense form.
UPoly to_upoly(const Polynomial& f, Var x);
Polynomial from_upoly(const UPoly& p, Var x);

}  // namespace nra

template <>
struct std::hash<nra::Polynomial> {
  std::size_t operator()(const nra::Polynomial& p) const noexcept { return p.hash(); }
};
