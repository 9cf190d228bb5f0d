#include "nra/upoly.hpp"

#include <algorithm>

namespace nra::upoly {

int degree(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

void trim(UPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

UPoly derivative(const UPoly& p) {
  UPoly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

UPoly primitive(const UPoly& p) {
  if (p.empty()) return p;
  Integer g = 0;
  for (auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (p.back() < 0) g = -g;
  UPoly r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) mpz_divexact(r[i].get_mpz_t(), p[i].get_mpz_t(), g.get_mpz_t());
  return r;
}

Rational evaluate(const UPoly& p, const Rational& x) {
  if (p.empty()) return 0;
  // Horner over integers: sum c_i n^i d^(n-i), then divide by d^n.
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  Integer acc = 0, dp = 1;
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * num + p[i] * dp;
    dp *= den;
  }
  // acc = sum c_i num^i den^(n-i), with dp = den^(n+1)
  Rational r(acc, dp / den);
  r.canonicalize();
  return r;
}

int sign_at(const UPoly& p, const Rational& x) {
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  Integer acc = 0, dp = 1;
  for (std::size_t i = p.size(); i-- > 0;) {
    acc = acc * num + p[i] * dp;
    dp *= den;
  }
  return sgn(acc);
}

namespace {

/// Remainder of a by b over Q, scaled to a primitive integer polynomial.
UPoly prem_primitive(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  int db = degree(b);
  const Integer& lb = b.back();
  while (!r.empty() && degree(r) >= db) {
    Integer lr = r.back();
    int shift = degree(r) - db;
    for (auto& c : r) c *= lb;
    for (int i = 0; i <= db; ++i) r[i + shift] -= lr * b[i];
    trim(r);
  }
  return primitive(r);
}

}  // namespace

UPoly gcd(const UPoly& a0, const UPoly& b0) {
  UPoly a = primitive(a0), b = primitive(b0);
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (degree(a) < degree(b)) std::swap(a, b);
  while (!b.empty()) {
    UPoly r = prem_primitive(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return primitive(a);
}

UPoly divide(const UPoly& a, const UPoly& b) {
  if (b.empty()) throw PolyError("upoly::divide by zero");
  int da = degree(a), db = degree(b);
  if (da < db) return {};
  std::vector<Rational> rem(a.begin(), a.end());
  std::vector<Rational> q(da - db + 1);
  for (int i = da; i >= db; --i) {
    Rational c = rem[i] / Rational(b.back());
    q[i - db] = c;
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= c * b[j];
  }
  Integer l = 1;
  for (auto& c : q) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  UPoly r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    Rational s = q[i] * l;
    r[i] = s.get_num();
  }
  return primitive(r);
}

UPoly square_free(const UPoly& p) {
  if (degree(p) <= 0) return primitive(p);
  UPoly g = gcd(p, derivative(p));
  if (degree(g) <= 0) return primitive(p);
  return divide(p, g);
}

int sign_variations(const UPoly& p) {
  int v = 0, last = 0;
  for (auto& c : p) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

namespace {

/// p(a + w x) over Q, scaled to integers.
std::vector<Rational> compose_linear(const UPoly& p, const Rational& a, const Rational& w) {
  std::vector<Rational> r;
  for (std::size_t i = p.size(); i-- > 0;) {
    // r = r * (a + w x) + p[i]
    std::vector<Rational> n(r.size() + 1);
    for (std::size_t j = 0; j < r.size(); ++j) {
      n[j] += r[j] * a;
      n[j + 1] += r[j] * w;
    }
    n[0] += p[i];
    r = std::move(n);
  }
  return r;
}

}  // namespace

int descartes_bound(const UPoly& p, const Rational& a, const Rational& b) {
  // q(x) = p(a + (b - a) x) maps (0, 1) to (a, b); then (1 + x)^n q(1 / (1 + x))
  // maps (0, inf) to (0, 1).
  auto q = compose_linear(p, a, b - a);
  std::reverse(q.begin(), q.end());
  // Taylor shift by 1.
  int n = static_cast<int>(q.size()) - 1;
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= i; --j) q[j] += q[j + 1];
  int v = 0, last = 0;
  for (auto& c : q) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

Rational root_bound(const UPoly& p) {
  // Cauchy: |r| < 1 + max |a_i / a_n|.
  Rational m = 0;
  Rational lead = abs(p.back());
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Rational r = Rational(abs(p[i])) / lead;
    if (r > m) m = r;
  }
  Rational bound = 1 + m;
  Rational pow2 = 1;
  while (pow2 <= bound) pow2 *= 2;
  return pow2;
}

}  // namespace nra::upoly
