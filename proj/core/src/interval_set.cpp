#include "nra/interval_set.hpp"

namespace nra {

namespace {

Integer floor_q(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_q(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool nonempty(const std::optional<Endpoint>& lo, const std::optional<Endpoint>& hi) {
  if (!lo || !hi) return true;
  int c = compare(lo->value, hi->value);
  return c < 0 || (c == 0 && lo->closed && hi->closed);
}

/// Orders lower endpoints: -inf first; at equal values closed comes first.
int compare_lo(const std::optional<Endpoint>& a, const std::optional<Endpoint>& b) {
  if (!a || !b) return !a && !b ? 0 : !a ? -1 : 1;
  int c = compare(a->value, b->value);
  if (c != 0) return c;
  return a->closed == b->closed ? 0 : a->closed ? -1 : 1;
}

/// Orders upper endpoints: +inf last; at equal values open comes first.
int compare_hi(const std::optional<Endpoint>& a, const std::optional<Endpoint>& b) {
  if (!a || !b) return !a && !b ? 0 : !a ? 1 : -1;
  int c = compare(a->value, b->value);
  if (c != 0) return c;
  return a->closed == b->closed ? 0 : a->closed ? 1 : -1;
}

}  // namespace

Integer floor(const AlgebraicNumber& a) {
  if (a.is_rational()) return floor_q(a.rational());
  AlgebraicNumber r = a;
  while (floor_q(r.lo()) != floor_q(r.hi())) r = r.bisected();
  return r.is_rational() ? floor_q(r.rational()) : floor_q(r.lo());
}

Integer ceil(const AlgebraicNumber& a) {
  if (a.is_rational()) return ceil_q(a.rational());
  return floor(a) + 1;
}

IntervalSet IntervalSet::all() {
  IntervalSet s;
  s.pieces_.push_back(Interval{});
  return s;
}

IntervalSet IntervalSet::point(const AlgebraicNumber& a) {
  IntervalSet s;
  s.pieces_.push_back(Interval{Endpoint{a, true}, Endpoint{a, true}});
  return s;
}

IntervalSet IntervalSet::below(const AlgebraicNumber& a, bool closed) {
  IntervalSet s;
  s.pieces_.push_back(Interval{std::nullopt, Endpoint{a, closed}});
  return s;
}

IntervalSet IntervalSet::above(const AlgebraicNumber& a, bool closed) {
  IntervalSet s;
  s.pieces_.push_back(Interval{Endpoint{a, closed}, std::nullopt});
  return s;
}

IntervalSet IntervalSet::from_sorted(std::vector<Interval> pieces) {
  IntervalSet s;
  s.pieces_ = std::move(pieces);
  return s;
}

bool IntervalSet::contains(const AlgebraicNumber& a) const {
  for (auto& p : pieces_) {
    if (p.lo) {
      int c = compare(a, p.lo->value);
      if (c < 0 || (c == 0 && !p.lo->closed)) continue;
    }
    if (p.hi) {
      int c = compare(a, p.hi->value);
      if (c > 0 || (c == 0 && !p.hi->closed)) continue;
    }
    return true;
  }
  return false;
}

IntervalSet IntervalSet::intersect(const IntervalSet& o) const {
  IntervalSet r;
  std::size_t i = 0, j = 0;
  while (i < pieces_.size() && j < o.pieces_.size()) {
    const Interval& a = pieces_[i];
    const Interval& b = o.pieces_[j];
    auto lo = compare_lo(a.lo, b.lo) >= 0 ? a.lo : b.lo;
    int ch = compare_hi(a.hi, b.hi);
    auto hi = ch <= 0 ? a.hi : b.hi;
    if (nonempty(lo, hi)) r.pieces_.push_back(Interval{lo, hi});
    if (ch <= 0) ++i;
    if (ch >= 0) ++j;
  }
  return r;
}

IntervalSet IntervalSet::complement() const {
  IntervalSet r;
  std::optional<Endpoint> lo;  // start of the current gap, -inf when absent
  for (auto& p : pieces_) {
    if (p.lo) {
      std::optional<Endpoint> hi = Endpoint{p.lo->value, !p.lo->closed};
      if (nonempty(lo, hi)) r.pieces_.push_back(Interval{lo, hi});
    }
    if (!p.hi) return r;
    lo = Endpoint{p.hi->value, !p.hi->closed};
  }
  r.pieces_.push_back(Interval{lo, std::nullopt});
  return r;
}

AlgebraicNumber IntervalSet::pick() const {
  if (pieces_.empty()) throw PolyError("pick from empty set");
  AlgebraicNumber zero(0);
  if (contains(zero)) return zero;
  std::optional<Integer> best;
  auto consider = [&](const Integer& n) {
    if (!contains(AlgebraicNumber(Rational(n)))) return;
    if (!best || abs(n) < abs(*best)) best = n;
  };
  for (auto& p : pieces_) {
    // The piece lies entirely on one side of 0.
    bool positive = p.lo && compare(p.lo->value, zero) >= 0;
    if (positive) {
      Integer n = ceil(p.lo->value);
      if (!p.lo->closed && AlgebraicNumber(Rational(n)) == p.lo->value) n += 1;
      consider(n);
    } else if (p.hi) {
      Integer n = floor(p.hi->value);
      if (!p.hi->closed && AlgebraicNumber(Rational(n)) == p.hi->value) n -= 1;
      consider(n);
    }
  }
  if (best) return AlgebraicNumber(Rational(*best));
  for (auto& p : pieces_)
    if (p.lo && p.hi && compare(p.lo->value, p.hi->value) < 0) return rational_between(p.lo->value, p.hi->value);
  return pieces_.front().lo->value;
}

std::string IntervalSet::to_string() const {
  if (pieces_.empty()) return "{}";
  std::string s;
  for (auto& p : pieces_) {
    if (!s.empty()) s += " u ";
    s += p.lo ? (p.lo->closed ? "[" : "(") + p.lo->value.to_decimal(3) : "(-inf";
    s += ", ";
    s += p.hi ? p.hi->value.to_decimal(3) + (p.hi->closed ? "]" : ")") : "inf)";
  }
  return s;
}

}  // namespace nra
