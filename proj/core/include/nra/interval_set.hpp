#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nra/realalg.hpp"

namespace nra {

struct Endpoint {
  AlgebraicNumber value;
  bool closed = false;
};

/// Interval with optional (infinite when absent) endpoints.
struct Interval {
  std::optional<Endpoint> lo, hi;
};

/// Finite union of disjoint intervals of the real line, sorted.
class IntervalSet {
 public:
  static IntervalSet all();
  static IntervalSet none() { return {}; }
  static IntervalSet point(const AlgebraicNumber& a);
  /// (-inf, a) / (-inf, a] / (a, inf) / [a, inf).
  static IntervalSet below(const AlgebraicNumber& a, bool closed);
  static IntervalSet above(const AlgebraicNumber& a, bool closed);
  /// Pieces must be sorted, disjoint and non-empty.
  static IntervalSet from_sorted(std::vector<Interval> pieces);

  [[nodiscard]] bool empty() const { return pieces_.empty(); }
  [[nodiscard]] const std::vector<Interval>& pieces() const { return pieces_; }
  [[nodiscard]] bool contains(const AlgebraicNumber& a) const;

  [[nodiscard]] IntervalSet intersect(const IntervalSet& o) const;
  [[nodiscard]] IntervalSet complement() const;

  /// Member chosen by preference: 0, then the integer of smallest magnitude,
  /// then the simplest dyadic inside an open piece, then an isolated point.
  /// The set must be non-empty.
  [[nodiscard]] AlgebraicNumber pick() const;

  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<Interval> pieces_;
};

/// Floor and ceiling of an algebraic number.
Integer floor(const AlgebraicNumber& a);
Integer ceil(const AlgebraicNumber& a);

}  // namespace nra
