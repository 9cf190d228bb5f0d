#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nra/poly.hpp"

namespace nra {

/// Exact real algebraic number.
///
/// Irrational values are a square-free primitive defining polynomial together
/// with an open isolating interval (lo, hi) with dyadic endpoints that contains
/// exactly one root and whose endpoints are not roots. Rational values take a
/// fast path and carry lo == hi == value. Values are immutable.
class AlgebraicNumber {
 public:
  AlgebraicNumber() : AlgebraicNumber(Rational(0)) {}
  AlgebraicNumber(const Rational& q);  // NOLINT(google-explicit-constructor)
  AlgebraicNumber(long v) : AlgebraicNumber(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  /// Root of `defining` in (lo, hi). The caller guarantees that the interval
  /// isolates exactly one root and that neither endpoint is a root.
  static AlgebraicNumber from_isolating_interval(UPoly defining, Rational lo, Rational hi);

  [[nodiscard]] bool is_rational() const { return !defining_; }
  /// Only valid when is_rational().
  [[nodiscard]] const Rational& rational() const { return lo_; }
  /// Defining polynomial; for rationals p/q this is q x - p.
  [[nodiscard]] UPoly defining() const;
  [[nodiscard]] const Rational& lo() const { return lo_; }
  [[nodiscard]] const Rational& hi() const { return hi_; }
  [[nodiscard]] Rational width() const { return hi_ - lo_; }
  [[nodiscard]] int sign() const;

  /// Same value with isolating interval of width at most `width`.
  [[nodiscard]] AlgebraicNumber refined(const Rational& width) const;
  /// One bisection step (no-op for rationals).
  [[nodiscard]] AlgebraicNumber bisected() const;

  /// Decimal approximation with `digits` fractional digits (truncated).
  [[nodiscard]] std::string to_decimal(int digits = 6) const;

 private:
  std::shared_ptr<const UPoly> defining_;
  Rational lo_, hi_;
  int sign_lo_ = 0;  // sign of defining at lo (irrational case)
};

/// Exact three-way comparison: -1, 0, +1.
int compare(const AlgebraicNumber& a, const AlgebraicNumber& b);

inline bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) == 0; }
inline bool operator<(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) < 0; }
inline bool operator>(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) > 0; }
inline bool operator<=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) <= 0; }
inline bool operator>=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return compare(a, b) >= 0; }

/// 1-based position of a root in the increasing order of real roots.
struct RootIndex {
  unsigned k = 1;
};

/// All distinct real roots of a non-zero univariate polynomial, increasing.
/// Throws PolyError on the zero polynomial.
std::vector<AlgebraicNumber> isolate_real_roots(const UPoly& p);
std::vector<AlgebraicNumber> isolate_real_roots(const Polynomial& p, Var x);

/// Values of real variables.
using RealAssignment = std::map<Var, AlgebraicNumber>;

/// Exact sign of f at the point. Every variable of f must be assigned.
int sign_at(const Polynomial& f, const RealAssignment& m);

/// Real roots in `x` of f after substituting the values of all other
/// variables. `nullified` is set when the substituted polynomial is zero.
struct RootsAt {
  bool nullified = false;
  std::vector<AlgebraicNumber> roots;
};
RootsAt roots_at(const Polynomial& f, Var x, const RealAssignment& m);

/// A rational strictly between a and b (a < b required), preferring the
/// dyadic with the fewest bits.
Rational rational_between(const AlgebraicNumber& a, const AlgebraicNumber& b);
/// Simplest dyadic in the open interval (lo, hi), lo < hi.
Rational simple_dyadic_between(const Rational& lo, const Rational& hi);

/// Closed rational interval.
struct RationalInterval {
  Rational lo, hi;
};
/// Interval enclosure of f over a box; every variable of f must be present.
RationalInterval interval_evaluate(const Polynomial& f, const std::map<Var, RationalInterval>& box);

/// SMT-LIB rendering: rationals as numerals / (/ p q), irrationals as
/// (root-of <poly in x> k).
std::string to_smtlib(const AlgebraicNumber& a);
std::string rational_to_smtlib(const Rational& q);

/// Index k such that `a` is the k-th real root of its defining polynomial.
unsigned root_index(const AlgebraicNumber& a);

}  // namespace nra
