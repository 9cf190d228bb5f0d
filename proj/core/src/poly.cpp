#include "nra/poly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace nra {

namespace {
thread_local std::optional<DeadlineScope::TimePoint> active_deadline;
thread_local unsigned deadline_ticks = 0;
}  // namespace

DeadlineScope::DeadlineScope(std::optional<TimePoint> deadline) : saved_(active_deadline) {
  if (deadline && (!active_deadline || *deadline < *active_deadline)) active_deadline = deadline;
}

DeadlineScope::~DeadlineScope() { active_deadline = saved_; }

void check_deadline() {
  if (!active_deadline || ++deadline_ticks % 256 != 0) return;
  if (std::chrono::steady_clock::now() > *active_deadline) throw Interrupted();
}

// ---------------------------------------------------------------------------
// VarOrder

VarOrder::VarOrder(std::vector<Var> vars) {
  for (Var v : vars) push_back(v);
}

void VarOrder::push_back(Var v) {
  if (index_.count(v)) return;
  index_.emplace(v, vars_.size());
  vars_.push_back(v);
}

std::uint64_t VarOrder::rank(Var v) const {
  auto it = index_.find(v);
  if (it != index_.end()) return it->second;
  return (std::uint64_t{1} << 32) + v;
}

void VarOrder::sort(std::vector<Var>& vs) const {
  std::sort(vs.begin(), vs.end(), [this](Var a, Var b) { return rank(a) < rank(b); });
}

// ---------------------------------------------------------------------------
// Monomial

Monomial::Monomial(Var v, unsigned exp) {
  if (exp > 0) factors_.emplace_back(v, exp);
}

Monomial::Monomial(std::vector<std::pair<Var, unsigned>> factors) {
  std::sort(factors.begin(), factors.end());
  for (auto& [v, e] : factors) {
    if (e == 0) continue;
    if (!factors_.empty() && factors_.back().first == v)
      factors_.back().second += e;
    else
      factors_.emplace_back(v, e);
  }
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (auto& f : factors_) d += f.second;
  return d;
}

unsigned Monomial::degree(Var v) const {
  for (auto& f : factors_)
    if (f.first == v) return f.second;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
  Monomial r;
  auto a = factors_.begin();
  for (auto& [v, e] : o.factors_) {
    while (a != factors_.end() && a->first < v) r.factors_.push_back(*a++);
    if (a == factors_.end() || a->first != v || a->second < e) return std::nullopt;
    if (a->second > e) r.factors_.emplace_back(v, a->second - e);
    ++a;
  }
  while (a != factors_.end()) r.factors_.push_back(*a++);
  return r;
}

Monomial Monomial::without(Var v) const {
  Monomial r;
  for (auto& f : factors_)
    if (f.first != v) r.factors_.push_back(f);
  return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
  Monomial r;
  for (auto& [v, e] : factors_) {
    unsigned oe = o.degree(v);
    if (oe > 0) r.factors_.emplace_back(v, std::min(e, oe));
  }
  return r;
}

int compare_grlex(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  auto& fa = a.factors();
  auto& fb = b.factors();
  auto ia = fa.rbegin(), ib = fb.rbegin();
  while (ia != fa.rend() && ib != fb.rend()) {
    if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    ++ia;
    ++ib;
  }
  if (ia == fa.rend() && ib == fb.rend()) return 0;
  return ia == fa.rend() ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Polynomial

namespace {

bool term_before(const Polynomial::Term& a, const Polynomial::Term& b) {
  return compare_grlex(a.first, b.first) > 0;
}

}  // namespace

Polynomial::Polynomial(long c) : Polynomial(Integer(c)) {}

Polynomial::Polynomial(const Integer& c) {
  if (c != 0) terms_.emplace_back(Monomial(), c);
}

Polynomial Polynomial::variable(Var v) { return monomial(1, Monomial(v)); }

Polynomial Polynomial::monomial(const Integer& c, Monomial m) {
  Polynomial p;
  if (c != 0) p.terms_.emplace_back(std::move(m), c);
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_before);
  Polynomial p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().first == t.first)
      p.terms_.back().second += t.second;
    else
      p.terms_.push_back(std::move(t));
    if (p.terms_.back().second == 0) p.terms_.pop_back();
  }
  return p;
}

Polynomial Polynomial::from_coefficients(Var x, std::span<const Polynomial> coeffs) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (auto& [m, c] : coeffs[i].terms_) terms.emplace_back(m * Monomial(x, i), c);
  return from_terms(std::move(terms));
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one());
}

Integer Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().first.is_one()) return terms_.back().second;
  return 0;
}

unsigned Polynomial::degree(Var x) const {
  unsigned d = 0;
  for (auto& t : terms_) d = std::max(d, t.first.degree(x));
  return d;
}

unsigned Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().first.degree(); }

std::vector<Var> Polynomial::vars() const {
  std::vector<Var> vs;
  for (auto& t : terms_)
    for (auto& f : t.first.factors()) vs.push_back(f.first);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

Var Polynomial::top_var(const VarOrder& order) const {
  Var best = kNoVar;
  for (Var v : vars())
    if (best == kNoVar || order.rank(v) > order.rank(best)) best = v;
  return best;
}

std::vector<Polynomial> Polynomial::coefficients(Var x) const {
  std::vector<std::vector<Term>> buckets(degree(x) + 1);
  for (auto& [m, c] : terms_) buckets[m.degree(x)].emplace_back(m.without(x), c);
  std::vector<Polynomial> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Polynomial Polynomial::leading_coefficient(Var x) const {
  unsigned d = degree(x);
  std::vector<Term> terms;
  for (auto& [m, c] : terms_)
    if (m.degree(x) == d) terms.emplace_back(m.without(x), c);
  return from_terms(std::move(terms));
}

Integer Polynomial::content() const {
  Integer g = 0;
  for (auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.second.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

const Integer& Polynomial::leading_integer() const {
  static const Integer zero = 0;
  return terms_.empty() ? zero : terms_.front().second;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

namespace {

Polynomial merge(const Polynomial& a, const Polynomial& b, bool subtract) {
  std::vector<Polynomial::Term> out;
  auto& ta = a.terms();
  auto& tb = b.terms();
  out.reserve(ta.size() + tb.size());
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    int cmp = i == ta.size() ? -1 : j == tb.size() ? 1 : compare_grlex(ta[i].first, tb[j].first);
    if (cmp > 0) {
      out.push_back(ta[i++]);
    } else if (cmp < 0) {
      out.emplace_back(tb[j].first, subtract ? Integer(-tb[j].second) : tb[j].second);
      ++j;
    } else {
      Integer c = subtract ? Integer(ta[i].second - tb[j].second) : Integer(ta[i].second + tb[j].second);
      if (c != 0) out.emplace_back(ta[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  // Already sorted and combined.
  Polynomial r;
  return Polynomial::from_terms(std::move(out));
}

}  // namespace

Polynomial operator+(const Polynomial& a, const Polynomial& b) { return merge(a, b, false); }
Polynomial operator-(const Polynomial& a, const Polynomial& b) { return merge(a, b, true); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  check_deadline();
  std::vector<Polynomial::Term> out;
  out.reserve(a.terms().size() * b.terms().size());
  for (auto& [ma, ca] : a.terms())
    for (auto& [mb, cb] : b.terms()) out.emplace_back(ma * mb, ca * cb);
  return Polynomial::from_terms(std::move(out));
}

Polynomial Polynomial::scaled(const Integer& c) const {
  if (c == 0) return {};
  Polynomial r = *this;
  for (auto& t : r.terms_) t.second *= c;
  return r;
}

Polynomial Polynomial::pow(unsigned e) const {
  Polynomial result(1), base = *this;
  while (e > 0) {
    if (e & 1u) result *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return result;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
  auto& ta = a.terms();
  auto& tb = b.terms();
  for (std::size_t i = 0; i < ta.size() && i < tb.size(); ++i) {
    int c = compare_grlex(ta[i].first, tb[i].first);
    if (c != 0) return c < 0;
    if (ta[i].second != tb[i].second) return ta[i].second < tb[i].second;
  }
  return ta.size() < tb.size();
}

std::size_t Polynomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2); };
  for (auto& [m, c] : terms_) {
    for (auto& [v, e] : m.factors()) {
      mix(v);
      mix(e);
    }
    mix(mpz_get_si(c.get_mpz_t()));
    mix(mpz_sizeinbase(c.get_mpz_t(), 2));
  }
  return h;
}

Polynomial arith(const Polynomial& f, const Polynomial& g, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return f + g;
    case ArithOp::Sub: return f - g;
    case ArithOp::Mul: return f * g;
  }
  return {};
}

Polynomial derivative(const Polynomial& f, Var x) {
  std::vector<Polynomial::Term> out;
  for (auto& [m, c] : f.terms()) {
    unsigned d = m.degree(x);
    if (d == 0) continue;
    out.emplace_back(m.without(x) * Monomial(x, d - 1), c * d);
  }
  return Polynomial::from_terms(std::move(out));
}

Polynomial derivative(const Polynomial& f, Var x, unsigned k) {
  Polynomial r = f;
  for (unsigned i = 0; i < k && !r.is_zero(); ++i) r = derivative(r, x);
  return r;
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw PolyError("division by zero polynomial");
  if (b.is_constant()) {
    const Integer& c = b.terms()[0].second;
    std::vector<Polynomial::Term> out;
    for (auto& [m, v] : a.terms()) {
      if (!mpz_divisible_p(v.get_mpz_t(), c.get_mpz_t())) throw PolyError("inexact division");
      Integer q;
      mpz_divexact(q.get_mpz_t(), v.get_mpz_t(), c.get_mpz_t());
      out.emplace_back(m, std::move(q));
    }
    return Polynomial::from_terms(std::move(out));
  }
  const auto& [lm, lc] = b.terms().front();
  Polynomial rem = a;
  std::vector<Polynomial::Term> quot;
  while (!rem.is_zero()) {
    const auto& [rm, rc] = rem.terms().front();
    auto qm = rm.divide(lm);
    if (!qm || !mpz_divisible_p(rc.get_mpz_t(), lc.get_mpz_t())) throw PolyError("inexact division");
    Integer qc;
    mpz_divexact(qc.get_mpz_t(), rc.get_mpz_t(), lc.get_mpz_t());
    Polynomial t = Polynomial::monomial(qc, *qm);
    quot.emplace_back(*qm, qc);
    rem -= t * b;
  }
  return Polynomial::from_terms(std::move(quot));
}

Polynomial primitive(const Polynomial& f, bool fix_sign) {
  if (f.is_zero()) return f;
  Integer c = f.content();
  if (fix_sign && f.leading_integer() < 0) c = -c;
  if (c == 1) return f;
  return exact_divide(f, Polynomial(c));
}

// ---------------------------------------------------------------------------
// Resultants

namespace {

using Dense = std::vector<Polynomial>;  // coefficients in the eliminated variable

int deg(const Dense& a) { return static_cast<int>(a.size()) - 1; }

void trim(Dense& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

/// Pseudo-remainder prem(a, b) = lc(b)^(deg a - deg b + 1) a mod b.
Dense prem(Dense a, const Dense& b) {
  int db = deg(b);
  int e = deg(a) - db + 1;
  const Polynomial& lb = b.back();
  while (!a.empty() && deg(a) >= db) {
    Polynomial la = a.back();
    int shift = deg(a) - db;
    for (auto& c : a) c *= lb;
    for (int i = 0; i <= db; ++i) a[i + shift] -= la * b[i];
    trim(a);
    --e;
  }
  if (e > 0) {
    Polynomial s = lb.pow(e);
    for (auto& c : a) c *= s;
  }
  return a;
}

}  // namespace

Polynomial resultant(const Polynomial& f, const Polynomial& g, Var x) {
  Dense a = f.coefficients(x);
  Dense b = g.coefficients(x);
  trim(a);
  trim(b);
  if (a.empty() || b.empty()) return {};
  if (deg(a) < 1 || deg(b) < 1) throw PolyError("resultant: degenerate degree");

  Polynomial sign(1);
  if (deg(a) < deg(b)) {
    std::swap(a, b);
    if ((deg(a) % 2 == 1) && (deg(b) % 2 == 1)) sign = -1;
  }
  // Subresultant PRS (Collins / Brown), without content removal.
  Polynomial g_(1), h(1);
  while (true) {
    int delta = deg(a) - deg(b);
    if ((deg(a) % 2 == 1) && (deg(b) % 2 == 1)) sign = -sign;
    Dense r = prem(a, b);
    a = b;
    if (r.empty()) return {};
    Polynomial divisor = g_ * h.pow(delta);
    for (auto& c : r) c = exact_divide(c, divisor);
    b = std::move(r);
    g_ = a.back();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g_;
    } else {
      h = exact_divide(g_.pow(delta), h.pow(delta - 1));
    }
    if (deg(b) == 0) {
      int da = deg(a);
      Polynomial res;
      if (da == 0) {
        res = b.back();
      } else if (da == 1) {
        res = b.back();
      } else {
        res = exact_divide(b.back().pow(da), h.pow(da - 1));
      }
      return sign * res;
    }
  }
}

Polynomial discriminant(const Polynomial& f, Var x) {
  unsigned n = f.degree(x);
  if (n < 2) throw PolyError("discriminant: degree < 2");
  Polynomial r = resultant(f, derivative(f, x), x);
  Polynomial d = exact_divide(r, f.leading_coefficient(x));
  if ((n * (n - 1) / 2) % 2 == 1) d = -d;
  return d;
}

// ---------------------------------------------------------------------------
// Substitution and evaluation

Polynomial substitute(const Polynomial& f, const std::map<Var, Rational>& values) {
  Polynomial cur = f;
  for (auto& [v, q] : values) {
    unsigned d = cur.degree(v);
    if (d == 0) continue;
    const Integer& num = q.get_num();
    const Integer& den = q.get_den();
    // f(v = n/d) * d^deg = sum c_i n^i d^(deg-i)
    std::vector<Integer> npow(d + 1), dpow(d + 1);
    npow[0] = 1;
    dpow[0] = 1;
    for (unsigned i = 1; i <= d; ++i) {
      npow[i] = npow[i - 1] * num;
      dpow[i] = dpow[i - 1] * den;
    }
    std::vector<Polynomial::Term> out;
    for (auto& [m, c] : cur.terms()) {
      unsigned e = m.degree(v);
      out.emplace_back(m.without(v), c * npow[e] * dpow[d - e]);
    }
    cur = Polynomial::from_terms(std::move(out));
  }
  return cur;
}

Polynomial substitute(const Polynomial& f, Var x, const Polynomial& replacement) {
  auto coeffs = f.coefficients(x);
  Polynomial r;
  for (std::size_t i = coeffs.size(); i-- > 0;) r = r * replacement + coeffs[i];
  return r;
}

Polynomial rename(const Polynomial& f, const std::map<Var, Var>& renaming) {
  std::vector<Polynomial::Term> out;
  for (auto& [m, c] : f.terms()) {
    std::vector<std::pair<Var, unsigned>> fs;
    for (auto [v, e] : m.factors()) {
      auto it = renaming.find(v);
      fs.emplace_back(it == renaming.end() ? v : it->second, e);
    }
    out.emplace_back(Monomial(std::move(fs)), c);
  }
  return Polynomial::from_terms(std::move(out));
}

Rational evaluate(const Polynomial& f, const std::map<Var, Rational>& values) {
  Rational sum = 0;
  for (auto& [m, c] : f.terms()) {
    Rational t = c;
    for (auto& [v, e] : m.factors()) {
      auto it = values.find(v);
      if (it == values.end()) throw PolyError("evaluate: unassigned variable");
      Rational p;
      mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), e);
      mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), e);
      t *= p;
    }
    sum += t;
  }
  return sum;
}

std::vector<Polynomial> simple_factors(const Polynomial& f) {
  std::vector<Polynomial> out;
  if (f.is_constant()) return out;
  Monomial g = f.terms().front().first;
  for (auto& t : f.terms()) g = g.gcd(t.first);
  Polynomial rest = f;
  if (!g.is_one()) {
    std::vector<Polynomial::Term> terms;
    for (auto& [m, c] : f.terms()) terms.emplace_back(*m.divide(g), c);
    rest = Polynomial::from_terms(std::move(terms));
    for (auto& [v, e] : g.factors()) out.push_back(Polynomial::variable(v));
  }
  if (!rest.is_constant()) out.push_back(primitive(rest));
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string default_var_name(Var v) { return "v" + std::to_string(v); }

namespace {

std::string monomial_text(const Monomial& m, const Integer& absc, const VarNamer& namer) {
  std::vector<std::string> parts;
  if (absc != 1 || m.is_one()) parts.push_back(absc.get_str());
  for (auto& [v, e] : m.factors())
    for (unsigned i = 0; i < e; ++i) parts.push_back(namer(v));
  if (parts.size() == 1) return parts[0];
  std::string s = "(*";
  for (auto& p : parts) s += " " + p;
  return s + ")";
}

std::string sum_text(const std::vector<std::pair<const Monomial*, Integer>>& terms, const VarNamer& namer) {
  std::vector<std::string> pos, neg;
  for (auto& [m, c] : terms) {
    if (c > 0)
      pos.push_back(monomial_text(*m, c, namer));
    else
      neg.push_back(monomial_text(*m, Integer(-c), namer));
  }
  if (pos.empty() && neg.empty()) return "0";
  std::string head;
  if (pos.size() == 1) {
    head = pos[0];
  } else if (pos.size() > 1) {
    head = "(+";
    for (auto& p : pos) head += " " + p;
    head += ")";
  }
  if (neg.empty()) return head;
  std::string s = "(-";
  if (!head.empty()) s += " " + head;
  if (head.empty() && neg.size() > 1) {
    // -(a + b)
    s += " (+";
    for (auto& n : neg) s += " " + n;
    return s + "))";
  }
  for (auto& n : neg) s += " " + n;
  return s + ")";
}

}  // namespace

std::string to_smtlib(const Polynomial& f, const VarNamer& namer) {
  std::vector<std::pair<const Monomial*, Integer>> terms;
  for (auto& [m, c] : f.terms()) terms.emplace_back(&m, c);
  return sum_text(terms, namer);
}

std::pair<std::string, std::string> to_smtlib_sides(const Polynomial& f, const VarNamer& namer) {
  std::vector<std::pair<const Monomial*, Integer>> terms;
  for (auto& [m, c] : f.terms())
    if (!m.is_one()) terms.emplace_back(&m, c);
  Integer k = -f.constant_term();
  std::string rhs = k < 0 ? "(- " + Integer(-k).get_str() + ")" : k.get_str();
  return {sum_text(terms, namer), rhs};
}

std::ostream& operator<<(std::ostream& os, const Polynomial& f) { return os << to_smtlib(f); }

UPoly to_upoly(const Polynomial& f, Var x) {
  UPoly p(f.degree(x) + 1);
  for (auto& [m, c] : f.terms()) {
    if (m.factors().size() > 1 || (!m.is_one() && m.factors()[0].first != x))
      throw PolyError("to_upoly: polynomial is not univariate");
    p[m.degree(x)] += c;
  }
  while (p.size() > 1 && p.back() == 0) p.pop_back();
  if (p.size() == 1 && p[0] == 0) p.clear();
  return p;
}

Polynomial from_upoly(const UPoly& p, Var x) {
  std::vector<Polynomial::Term> terms;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != 0) terms.emplace_back(Monomial(x, static_cast<unsigned>(i)), p[i]);
  return Polynomial::from_terms(std::move(terms));
}

}  // namespace nra
