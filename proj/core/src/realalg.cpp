#include "nra/realalg.hpp"

#include <algorithm>
#include <cassert>

#include "nra/upoly.hpp"

namespace nra {

namespace {

// Auxiliary variables used while eliminating algebraic coordinates.
constexpr Var kAuxValue = kNoVar - 1;
constexpr Var kAuxShift = kNoVar - 2;

}  // namespace

// ---------------------------------------------------------------------------
// AlgebraicNumber

AlgebraicNumber::AlgebraicNumber(const Rational& q) : lo_(q), hi_(q) { lo_.canonicalize(); hi_ = lo_; }

AlgebraicNumber AlgebraicNumber::from_isolating_interval(UPoly defining, Rational lo, Rational hi) {
  AlgebraicNumber a;
  a.sign_lo_ = upoly::sign_at(defining, lo);
  assert(a.sign_lo_ != 0 && upoly::sign_at(defining, hi) == -a.sign_lo_);
  a.defining_ = std::make_shared<const UPoly>(std::move(defining));
  a.lo_ = std::move(lo);
  a.hi_ = std::move(hi);
  return a;
}

UPoly AlgebraicNumber::defining() const {
  if (defining_) return *defining_;
  return UPoly{-lo_.get_num(), lo_.get_den()};
}

int AlgebraicNumber::sign() const {
  if (is_rational()) return sgn(lo_);
  if (lo_ >= 0) return 1;
  if (hi_ <= 0) return -1;
  return compare(*this, AlgebraicNumber(0));
}

AlgebraicNumber AlgebraicNumber::bisected() const {
  if (is_rational()) return *this;
  Rational mid = (lo_ + hi_) / 2;
  int s = upoly::sign_at(*defining_, mid);
  if (s == 0) return AlgebraicNumber(mid);
  AlgebraicNumber r = *this;
  if (s == sign_lo_)
    r.lo_ = mid;
  else
    r.hi_ = mid;
  return r;
}

AlgebraicNumber AlgebraicNumber::refined(const Rational& width) const {
  AlgebraicNumber r = *this;
  while (!r.is_rational() && r.width() > width) r = r.bisected();
  return r;
}

std::string AlgebraicNumber::to_decimal(int digits) const {
  Rational scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational v = lo_;
  if (!is_rational()) {
    AlgebraicNumber r = refined(Rational(1, 4) / scale);
    v = (r.lo_ + r.hi_) / 2;
  }
  bool neg = v < 0;
  if (neg) v = -v;
  Rational scaled = v * scale;
  Integer n = scaled.get_num() / scaled.get_den();
  std::string s = n.get_str();
  if (digits > 0) {
    while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
    s.insert(s.end() - digits, '.');
  }
  return (neg ? "-" : "") + s;
}

int compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational()) return cmp(a.rational(), b.rational()) < 0 ? -1 : cmp(a.rational(), b.rational()) > 0 ? 1 : 0;
  if (!a.is_rational() && b.is_rational()) return -compare(b, a);
  if (a.is_rational()) {
    const Rational& q = a.rational();
    if (q <= b.lo()) return -1;
    if (q >= b.hi()) return 1;
    UPoly p = b.defining();
    int s = upoly::sign_at(p, q);
    if (s == 0) return 0;
    // Same sign as at lo: q lies between lo and the root.
    return s == upoly::sign_at(p, b.lo()) ? -1 : 1;
  }
  AlgebraicNumber x = a, y = b;
  bool tested_equal = false;
  while (true) {
    if (x.is_rational() || y.is_rational()) return compare(x, y);
    if (x.hi() <= y.lo()) return -1;
    if (y.hi() <= x.lo()) return 1;
    if (!tested_equal) {
      tested_equal = true;
      UPoly g = upoly::gcd(x.defining(), y.defining());
      if (upoly::degree(g) >= 1) {
        Rational l = std::max(x.lo(), y.lo());
        Rational h = std::min(x.hi(), y.hi());
        if (upoly::sign_at(g, l) * upoly::sign_at(g, h) < 0) return 0;
      }
    }
    x = x.bisected();
    y = y.bisected();
  }
}

// ---------------------------------------------------------------------------
// Root isolation

namespace {

std::vector<Integer> small_divisors(const Integer& n) {
  std::vector<Integer> ds;
  Integer a = abs(n);
  if (a > Integer(1) << 20) return ds;
  unsigned long v = a.get_ui();
  for (unsigned long d = 1; d * d <= v; ++d) {
    if (v % d) continue;
    ds.emplace_back(d);
    if (d * d != v) ds.emplace_back(v / d);
  }
  return ds;
}

/// Looks for a rational root of p in (lo, hi), p square-free with one root there.
std::optional<Rational> rational_root_in(const UPoly& p, Rational lo, Rational hi) {
  auto divisors = small_divisors(p.back());
  if (divisors.empty()) return std::nullopt;
  Rational lim = Rational(1) / abs(p.back());
  int slo = upoly::sign_at(p, lo);
  while (hi - lo >= lim) {
    Rational mid = (lo + hi) / 2;
    int s = upoly::sign_at(p, mid);
    if (s == 0) return mid;
    if (s == slo)
      lo = mid;
    else
      hi = mid;
  }
  for (auto& d : divisors) {
    Rational l = lo * d;
    Integer u = l.get_num() / l.get_den();
    if (u <= l) u += 1;
    if (u >= l && Rational(u) < hi * d) {
      Rational cand(u, d);
      cand.canonicalize();
      if (upoly::sign_at(p, cand) == 0) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<AlgebraicNumber> isolate_real_roots(const UPoly& p0) {
  UPoly p = p0;
  upoly::trim(p);
  if (p.empty()) throw PolyError("isolate_real_roots: zero polynomial");
  if (upoly::degree(p) == 0) return {};
  UPoly q = upoly::square_free(p);
  if (upoly::degree(q) == 1) {
    Rational r(-q[0], q[1]);
    r.canonicalize();
    return {AlgebraicNumber(r)};
  }
  Rational bound = upoly::root_bound(q);
  std::vector<Rational> rational_roots;
  std::vector<std::pair<Rational, Rational>> intervals;
  std::vector<std::pair<Rational, Rational>> todo{{-bound, bound}};
  while (!todo.empty()) {
    check_deadline();
    auto [a, b] = todo.back();
    todo.pop_back();
    int v = upoly::descartes_bound(q, a, b);
    if (v == 0) continue;
    if (v == 1) {
      intervals.emplace_back(a, b);
      continue;
    }
    Rational m = (a + b) / 2;
    if (upoly::sign_at(q, m) == 0) rational_roots.push_back(m);
    todo.emplace_back(a, m);
    todo.emplace_back(m, b);
  }
  std::vector<std::pair<Rational, Rational>> irrational;
  for (auto& [a, b] : intervals) {
    if (auto r = rational_root_in(q, a, b))
      rational_roots.push_back(*r);
    else
      irrational.emplace_back(a, b);
  }
  // Divide out the rational roots so irrational values get smaller defining
  // polynomials.
  UPoly def = q;
  for (auto& r : rational_roots) def = upoly::divide(def, UPoly{-r.get_num(), r.get_den()});
  std::vector<AlgebraicNumber> out;
  for (auto& r : rational_roots) out.emplace_back(r);
  for (auto& [a, b] : irrational) out.push_back(AlgebraicNumber::from_isolating_interval(def, a, b));
  std::sort(out.begin(), out.end(), [](const AlgebraicNumber& x, const AlgebraicNumber& y) {
    return x.lo() < y.lo() || (x.lo() == y.lo() && x.hi() < y.hi());
  });
  return out;
}

std::vector<AlgebraicNumber> isolate_real_roots(const Polynomial& p, Var x) { return isolate_real_roots(to_upoly(p, x)); }

Rational simple_dyadic_between(const Rational& lo, const Rational& hi) {
  assert(lo < hi);
  if (lo < 0 && hi > 0) return 0;
  if (hi <= 0) return -simple_dyadic_between(-hi, -lo);
  Integer scale = 1;
  while (true) {
    Rational l = lo * scale;
    Integer n = l.get_num() / l.get_den();  // floor, l >= 0
    n += 1;
    if (Rational(n) < hi * scale) {
      Rational r(n, scale);
      r.canonicalize();
      return r;
    }
    scale *= 2;
  }
}

Rational rational_between(const AlgebraicNumber& a0, const AlgebraicNumber& b0) {
  AlgebraicNumber a = a0, b = b0;
  while (true) {
    Rational l = a.hi(), h = b.lo();
    if (l < h) return simple_dyadic_between(l, h);
    if (l == h && !a.is_rational() && !b.is_rational()) return l;
    a = a.bisected();
    b = b.bisected();
  }
}

// ---------------------------------------------------------------------------
// Interval evaluation

namespace {

RationalInterval mul(const RationalInterval& a, const RationalInterval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

RationalInterval pow(const RationalInterval& a, unsigned e) {
  if (e == 0) return {1, 1};
  Rational plo, phi;
  mpz_pow_ui(plo.get_num_mpz_t(), a.lo.get_num_mpz_t(), e);
  mpz_pow_ui(plo.get_den_mpz_t(), a.lo.get_den_mpz_t(), e);
  mpz_pow_ui(phi.get_num_mpz_t(), a.hi.get_num_mpz_t(), e);
  mpz_pow_ui(phi.get_den_mpz_t(), a.hi.get_den_mpz_t(), e);
  if (e % 2 == 1) return {plo, phi};
  if (a.lo >= 0) return {plo, phi};
  if (a.hi <= 0) return {phi, plo};
  return {0, std::max(plo, phi)};
}

}  // namespace

RationalInterval interval_evaluate(const Polynomial& f, const std::map<Var, RationalInterval>& box) {
  RationalInterval sum{0, 0};
  for (auto& [m, c] : f.terms()) {
    RationalInterval t{c, c};
    for (auto& [v, e] : m.factors()) {
      auto it = box.find(v);
      if (it == box.end()) throw PolyError("interval_evaluate: unassigned variable");
      t = mul(t, pow(it->second, e));
    }
    sum.lo += t.lo;
    sum.hi += t.hi;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Signs and roots at algebraic points

namespace {

struct SplitPoint {
  std::map<Var, Rational> rationals;
  std::map<Var, AlgebraicNumber> algebraics;
};

SplitPoint split(const Polynomial& f, const RealAssignment& m, Var skip) {
  SplitPoint sp;
  for (Var v : f.vars()) {
    if (v == skip) continue;
    auto it = m.find(v);
    if (it == m.end()) throw PolyError("unassigned variable in exact evaluation");
    if (it->second.is_rational())
      sp.rationals.emplace(v, it->second.rational());
    else
      sp.algebraics.emplace(v, it->second);
  }
  return sp;
}

std::map<Var, RationalInterval> box_of(const std::map<Var, AlgebraicNumber>& alg) {
  std::map<Var, RationalInterval> box;
  for (auto& [v, a] : alg) box.emplace(v, RationalInterval{a.lo(), a.hi()});
  return box;
}

void bisect_all(std::map<Var, AlgebraicNumber>& alg) {
  for (auto& [v, a] : alg) a = a.bisected();
}

/// Eliminates every algebraic coordinate from g with resultants against the
/// defining polynomials.
Polynomial eliminate(Polynomial g, const std::map<Var, AlgebraicNumber>& alg) {
  for (auto& [v, a] : alg) {
    if (g.is_zero()) break;
    if (g.degree(v) == 0) continue;
    g = resultant(from_upoly(a.defining(), v), g, v);
  }
  return g;
}

int sign_univariate(const Polynomial& g, Var v, AlgebraicNumber a) {
  UPoly u = to_upoly(g, v);
  UPoly h = upoly::gcd(a.defining(), u);
  if (upoly::degree(h) >= 1 && upoly::sign_at(h, a.lo()) * upoly::sign_at(h, a.hi()) < 0) return 0;
  while (true) {
    if (a.is_rational()) return upoly::sign_at(u, a.rational());
    auto iv = interval_evaluate(g, {{v, RationalInterval{a.lo(), a.hi()}}});
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
    a = a.bisected();
  }
}

}  // namespace

int sign_at(const Polynomial& f, const RealAssignment& m) {
  SplitPoint sp = split(f, m, kNoVar);
  Polynomial g = substitute(f, sp.rationals);
  if (g.is_constant()) return sgn(g.constant_term());
  std::map<Var, AlgebraicNumber> alg;
  for (Var v : g.vars()) alg.emplace(v, sp.algebraics.at(v));
  for (auto& [v, a] : alg) {
    // A coordinate may have collapsed to a rational during refinement
    // elsewhere; substitute it directly.
    if (a.is_rational()) {
      return sign_at(g, RealAssignment(alg.begin(), alg.end()));
    }
  }
  if (alg.size() == 1) return sign_univariate(g, alg.begin()->first, alg.begin()->second);

  auto try_intervals = [&](int rounds) -> std::optional<int> {
    for (int i = 0; i < rounds; ++i) {
      check_deadline();
      for (auto& [v, a] : alg)
        if (a.is_rational()) return sign_at(g, RealAssignment(alg.begin(), alg.end()));
      auto iv = interval_evaluate(g, box_of(alg));
      if (iv.lo > 0) return 1;
      if (iv.hi < 0) return -1;
      bisect_all(alg);
    }
    return std::nullopt;
  };
  if (auto s = try_intervals(8)) return *s;

  // g(alpha) is a root of R(t) = Res(t - g, p_1, ..., p_k).
  Polynomial r = eliminate(Polynomial::variable(kAuxValue) - g, alg);
  UPoly u = to_upoly(r, kAuxValue);
  std::size_t zeros = 0;
  while (zeros < u.size() && u[zeros] == 0) ++zeros;
  if (zeros == 0) {
    while (true)
      if (auto s = try_intervals(1)) return *s;
  }
  // |nonzero roots| > |a0| / (|a0| + max |ai|).
  UPoly v(u.begin() + static_cast<std::ptrdiff_t>(zeros), u.end());
  Integer mx = 0;
  for (std::size_t i = 1; i < v.size(); ++i) mx = std::max(mx, Integer(abs(v[i])));
  Rational delta(abs(v[0]), abs(v[0]) + mx);
  delta.canonicalize();
  while (true) {
    for (auto& [w, a] : alg)
      if (a.is_rational()) return sign_at(g, RealAssignment(alg.begin(), alg.end()));
    auto iv = interval_evaluate(g, box_of(alg));
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
    if (iv.lo > -delta && iv.hi < delta) return 0;
    bisect_all(alg);
  }
}

RootsAt roots_at(const Polynomial& f, Var x, const RealAssignment& m) {
  SplitPoint sp = split(f, m, x);
  Polynomial g = substitute(f, sp.rationals);
  RootsAt out;
  std::map<Var, AlgebraicNumber> alg;
  for (Var v : g.vars())
    if (v != x) alg.emplace(v, sp.algebraics.at(v));
  if (alg.empty()) {
    if (g.is_zero()) {
      out.nullified = true;
      return out;
    }
    out.roots = isolate_real_roots(to_upoly(g, x));
    return out;
  }
  RealAssignment point(m.begin(), m.end());
  auto coeffs = g.coefficients(x);
  for (auto& c : coeffs)
    if (!c.is_constant() && sign_at(c, point) == 0) c = Polynomial();
  Polynomial h = Polynomial::from_coefficients(x, coeffs);
  if (h.is_zero()) {
    out.nullified = true;
    return out;
  }
  if (h.degree(x) == 0) return out;

  std::map<Var, AlgebraicNumber> hal;
  for (Var v : h.vars())
    if (v != x) hal.emplace(v, alg.at(v));
  Polynomial r = eliminate(h, hal);
  if (r.is_zero()) {
    // Some conjugate point nullifies h; perturb and keep the lowest-order
    // coefficient in the perturbation, which still vanishes on our roots.
    Polynomial s = eliminate(h + Polynomial::variable(kAuxShift), hal);
    for (auto& c : s.coefficients(kAuxShift))
      if (!c.is_zero()) {
        r = c;
        break;
      }
  }
  UPoly u = to_upoly(r, x);
  if (upoly::degree(u) <= 0) return out;
  for (auto& beta : isolate_real_roots(u)) {
    point[x] = beta;
    if (sign_at(h, point) == 0) out.roots.push_back(beta);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string rational_to_smtlib(const Rational& q) {
  Rational a = abs(q);
  std::string body = a.get_den() == 1 ? a.get_num().get_str()
                                      : "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  return q < 0 ? "(- " + body + ")" : body;
}

unsigned root_index(const AlgebraicNumber& a) {
  if (a.is_rational()) return 1;
  auto roots = isolate_real_roots(a.defining());
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (compare(roots[i], a) == 0) return static_cast<unsigned>(i + 1);
  return 0;
}

std::string to_smtlib(const AlgebraicNumber& a) {
  if (a.is_rational()) return rational_to_smtlib(a.rational());
  constexpr Var x = 0;
  return "(root-of " + to_smtlib(from_upoly(a.defining(), x), [](Var) { return std::string("x"); }) + " " +
         std::to_string(root_index(a)) + ")";
}

}  // namespace nra
