#pragma once

// Dense univariate polynomials over Z and Q.

#include <qhm/integer.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace qhm {

/// Coefficients are stored in ascending order; the zero polynomial has no
/// coefficients and degree -1. Trailing zeros are never stored.
template <class Coeff>
class Polynomial {
 public:
  using coeff_type = Coeff;

  Polynomial() = default;
  Polynomial(std::initializer_list<Coeff> coeffs) : coeffs_(coeffs) { trim(); }
  explicit Polynomial(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Coeff& c) { return Polynomial(std::vector<Coeff>{c}); }

  static Polynomial monomial(const Coeff& c, std::size_t k) {
    std::vector<Coeff> v(k + 1, Coeff(0));
    v[k] = c;
    return Polynomial(std::move(v));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Coeff coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Coeff(0); }
  const Coeff& lead() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return coeffs_.back();
  }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }

  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Coeff(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Coeff(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Polynomial& operator*=(const Coeff& s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Coeff& s) { return a *= s; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Coeff> out(a.coeffs_.size() + b.coeffs_.size() - 1, Coeff(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(out));
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<Coeff> coeffs_;
};

using IntPoly = Polynomial<Integer>;
using RatPoly = Polynomial<Rational>;

template <class Coeff>
std::string to_string(const Polynomial<Coeff>& p, char var = 'x') {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    Coeff c = p.coeff(static_cast<std::size_t>(i));
    if (c == 0) continue;
    bool negative = c < 0;
    Coeff mag = negative ? Coeff(-c) : c;
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (i == 0 || mag != 1) {
      os << to_string(mag);
      if (i > 0) os << '*';
    }
    if (i >= 1) os << var;
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

template <class Coeff>
std::ostream& operator<<(std::ostream& os, const Polynomial<Coeff>& p) {
  return os << to_string(p);
}

inline RatPoly to_rational(const IntPoly& p) {
  std::vector<Rational> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.emplace_back(c);
  return RatPoly(std::move(v));
}

inline Integer content(const IntPoly& p) {
  Integer g = 0;
  for (const auto& c : p.coeffs()) g = gcd(g, c);
  return g;
}

/// Divides out the content and makes the leading coefficient positive.
inline IntPoly primitive_part(const IntPoly& p) {
  if (p.is_zero()) return p;
  Integer g = content(p);
  if (p.lead() < 0) g = -g;
  std::vector<Integer> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.push_back(c / g);
  return IntPoly(std::move(v));
}

/// Clears denominators and content with a positive factor, so the sign of
/// every value is preserved.
inline IntPoly primitive_signed(const RatPoly& p) {
  if (p.is_zero()) return {};
  Integer den = 1;
  for (const auto& c : p.coeffs()) den = lcm(den, c.get_den());
  std::vector<Integer> v;
  v.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) v.push_back(c.get_num() * (den / c.get_den()));
  IntPoly q(std::move(v));
  Integer g = content(q);
  std::vector<Integer> w;
  for (const auto& c : q.coeffs()) w.push_back(c / g);
  return IntPoly(std::move(w));
}

/// Integer primitive polynomial with positive leading coefficient.
inline IntPoly primitive_part(const RatPoly& p) { return primitive_part(primitive_signed(p)); }

template <class Coeff>
Polynomial<Coeff> derivative(const Polynomial<Coeff>& p) {
  if (p.degree() <= 0) return {};
  std::vector<Coeff> v(p.coeffs().size() - 1);
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) v[i - 1] = p.coeffs()[i] * static_cast<long>(i);
  return Polynomial<Coeff>(std::move(v));
}

template <class Coeff>
Rational evaluate(const Polynomial<Coeff>& p, const Rational& x) {
  Rational acc = 0;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + Rational(p.coeff(static_cast<std::size_t>(i)));
  return acc;
}

inline Integer evaluate(const IntPoly& p, const Integer& x) {
  Integer acc = 0;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + p.coeff(static_cast<std::size_t>(i));
  return acc;
}

/// Sign of p(x) using integer-only homogenised Horner evaluation.
inline int sign_at(const IntPoly& p, const Rational& x) {
  if (p.is_zero()) return 0;
  const Integer& num = x.get_num();
  const Integer& den = x.get_den();
  Integer acc = p.lead();
  Integer pw = den;
  for (int i = p.degree() - 1; i >= 0; --i) {
    acc = acc * num + p.coeff(static_cast<std::size_t>(i)) * pw;
    pw *= den;
  }
  return sgn(acc);
}

template <class Coeff>
std::pair<RatPoly, RatPoly> divrem(const Polynomial<Coeff>& a, const Polynomial<Coeff>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> r;
  for (const auto& c : a.coeffs()) r.emplace_back(c);
  int db = b.degree();
  if (a.degree() < db) return {RatPoly{}, RatPoly(std::move(r))};
  std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  Rational inv_lead = Rational(1) / Rational(b.lead());
  for (int i = a.degree(); i >= db; --i) {
    Rational f = r[static_cast<std::size_t>(i)] * inv_lead;
    if (f == 0) continue;
    q[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * Rational(b.coeff(static_cast<std::size_t>(j)));
  }
  r.resize(static_cast<std::size_t>(db));
  return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

template <class Coeff>
RatPoly remainder(const Polynomial<Coeff>& a, const Polynomial<Coeff>& b) {
  return divrem(a, b).second;
}

/// a / b when b divides a over Q with an integral quotient.
inline std::optional<IntPoly> divide_exact(const IntPoly& a, const IntPoly& b) {
  auto [q, r] = divrem(a, b);
  if (!r.is_zero()) return std::nullopt;
  std::vector<Integer> v;
  for (const auto& c : q.coeffs()) {
    if (c.get_den() != 1) return std::nullopt;
    v.push_back(c.get_num());
  }
  return IntPoly(std::move(v));
}

/// Primitive gcd over Z[x] (positive leading coefficient), via a primitive
/// remainder sequence.
inline IntPoly gcd(const IntPoly& a, const IntPoly& b) {
  IntPoly x = primitive_part(a);
  IntPoly y = primitive_part(b);
  while (!y.is_zero()) {
    IntPoly r = primitive_signed(remainder(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  return primitive_part(x);
}

inline IntPoly squarefree_part(const IntPoly& p) {
  IntPoly f = primitive_part(p);
  if (f.degree() <= 0) return f;
  IntPoly g = gcd(f, derivative(f));
  if (g.degree() == 0) return f;
  auto q = divide_exact(f, g);
  if (!q) throw std::logic_error("squarefree_part: inexact division");
  return primitive_part(*q);
}

/// p(s*x + t) over Q.
template <class Coeff>
RatPoly compose_linear(const Polynomial<Coeff>& p, const Rational& s, const Rational& t) {
  RatPoly lin{t, s};
  RatPoly acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * lin + RatPoly::constant(Rational(p.coeff(static_cast<std::size_t>(i))));
  return acc;
}

/// x^deg p(1/x).
inline IntPoly reverse(const IntPoly& p) {
  std::vector<Integer> v(p.coeffs().rbegin(), p.coeffs().rend());
  return IntPoly(std::move(v));
}

/// Resultant over Q by the Euclidean recursion.
template <class Coeff>
Rational resultant(const Polynomial<Coeff>& a0, const Polynomial<Coeff>& b0) {
  RatPoly a, b;
  if constexpr (std::is_same_v<Coeff, Integer>) {
    a = to_rational(a0);
    b = to_rational(b0);
  } else {
    a = a0;
    b = b0;
  }
  if (a.is_zero() || b.is_zero()) return 0;
  Rational acc = 1;
  while (true) {
    int m = a.degree(), n = b.degree();
    if (n == 0) {
      Rational pw = 1;
      for (int i = 0; i < m; ++i) pw *= b.lead();
      return acc * pw;
    }
    RatPoly r = remainder(a, b);
    if (r.is_zero()) return 0;
    int k = r.degree();
    Rational pw = 1;
    for (int i = 0; i < m - k; ++i) pw *= b.lead();
    if ((m % 2 == 1) && (n % 2 == 1)) acc = -acc;
    acc *= pw;
    a = std::move(b);
    b = std::move(r);
  }
}

/// Cauchy bound: every real root lies strictly inside (-B, B).
inline Integer root_bound(const IntPoly& p) {
  if (p.degree() <= 0) return 1;
  Integer lead = abs_value(p.lead());
  Integer mx = 0;
  for (int i = 0; i < p.degree(); ++i) mx = std::max(mx, Integer(abs_value(p.coeff(static_cast<std::size_t>(i)))));
  return ceil(ratio(mx, lead)) + 2;
}

/// Sturm sequence of a squarefree polynomial; counts distinct real roots.
class SturmSequence {
 public:
  SturmSequence() = default;
  explicit SturmSequence(const IntPoly& squarefree) {
    seq_.push_back(squarefree);
    if (squarefree.degree() <= 0) return;
    seq_.push_back(primitive_signed(to_rational(derivative(squarefree))));
    while (seq_.back().degree() > 0) {
      RatPoly r = remainder(seq_[seq_.size() - 2], seq_.back());
      if (r.is_zero()) break;
      seq_.push_back(primitive_signed(-r));
    }
  }

  int variations(const Rational& x) const {
    int count = 0, last = 0;
    for (const auto& p : seq_) {
      int s = sign_at(p, x);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  /// Number of distinct roots in (a, b].
  int count_half_open(const Rational& a, const Rational& b) const {
    if (b <= a) return 0;
    return variations(a) - variations(b);
  }

  /// Number of distinct roots in [a, b].
  int count_closed(const Rational& a, const Rational& b) const {
    if (b < a) return 0;
    int n = count_half_open(a, b);
    if (!seq_.empty() && sign_at(seq_.front(), a) == 0) ++n;
    return n;
  }

  const IntPoly& polynomial() const { return seq_.front(); }

 private:
  std::vector<IntPoly> seq_;
};

/// Isolating intervals [lo, hi] (lo < hi, endpoints not roots, or lo == hi for
/// rational roots) for all real roots of a squarefree polynomial, ascending.
inline std::vector<std::pair<Rational, Rational>> isolate_real_roots(const IntPoly& squarefree) {
  std::vector<std::pair<Rational, Rational>> out;
  if (squarefree.degree() <= 0) return out;
  SturmSequence sturm(squarefree);
  Rational bound(root_bound(squarefree));
  std::vector<std::pair<Rational, Rational>> work{{-bound, bound}};
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    int n = sturm.count_half_open(lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      if (sign_at(squarefree, hi) == 0) {
        out.emplace_back(hi, hi);
        continue;
      }
      if (sign_at(squarefree, lo) != 0) {
        out.emplace_back(lo, hi);
        continue;
      }
    }
    Rational mid = (lo + hi) / 2;
    work.emplace_back(lo, mid);
    work.emplace_back(mid, hi);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace qhm
