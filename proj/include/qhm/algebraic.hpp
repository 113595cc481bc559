#pragma once

// Exact real algebraic numbers: an irreducible integer polynomial together
// with a rational interval isolating one of its real roots.

#include <qhm/factor.hpp>
#include <qhm/polynomial.hpp>

#include <compare>
#include <algorithm>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhm {

/// Closed interval with rational endpoints.
struct Interval {
  Rational lo, hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

inline Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

inline Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  Interval out{p[0], p[0]};
  for (const auto& v : p) {
    if (v < out.lo) out.lo = v;
    if (v > out.hi) out.hi = v;
  }
  return out;
}

class AlgebraicReal;

namespace detail {

/// Bisection state for one isolating interval of a squarefree polynomial
/// whose endpoints are not roots.
class Bisector {
 public:
  Bisector(const IntPoly& poly, Rational lo, Rational hi)
      : poly_(&poly), lo_(std::move(lo)), hi_(std::move(hi)), sign_lo_(sign_at(poly, lo_)) {}

  void step() {
    Rational mid = (lo_ + hi_) / 2;
    int s = sign_at(*poly_, mid);
    if (s == 0) {
      // Only possible for degree-1 polynomials, which are handled exactly.
      lo_ = hi_ = mid;
      return;
    }
    if (s == sign_lo_) {
      lo_ = std::move(mid);
    } else {
      hi_ = std::move(mid);
    }
  }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Interval interval() const { return {lo_, hi_}; }

 private:
  const IntPoly* poly_;
  Rational lo_, hi_;
  int sign_lo_;
};

}  // namespace detail

class AlgebraicReal {
 public:
  AlgebraicReal() : AlgebraicReal(Rational(0)) {}
  AlgebraicReal(int v) : AlgebraicReal(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  explicit AlgebraicReal(const Integer& v) : AlgebraicReal(Rational(v)) {}
  explicit AlgebraicReal(const Rational& v) : value_(v) {
    value_.canonicalize();
    minpoly_ = IntPoly{-value_.get_num(), value_.get_den()};
    lo_ = Rational(qhm::floor(value_));
    hi_ = lo_ + 1;
  }

  /// The root of `poly` inside [lo, hi]; the interval must contain exactly
  /// one real root. The minimal polynomial is extracted by factoring.
  static AlgebraicReal from_root(const IntPoly& poly, const Rational& lo, const Rational& hi) {
    if (poly.is_zero()) throw std::invalid_argument("root(): zero polynomial");
    if (hi < lo) throw std::invalid_argument("root(): empty interval");
    IntPoly sq = squarefree_part(poly);
    if (SturmSequence(sq).count_closed(lo, hi) != 1)
      throw std::invalid_argument("root(): interval [" + qhm::to_string(lo) + ", " + qhm::to_string(hi) +
                                  "] does not isolate exactly one real root of " + qhm::to_string(poly));
    for (auto& f : irreducible_factors(sq)) {
      if (SturmSequence(f).count_closed(lo, hi) == 1) return from_irreducible(std::move(f), lo, hi);
    }
    throw std::logic_error("root(): no factor owns the root");
  }

  /// Trusted constructor: `minpoly` irreducible, exactly one root in [lo, hi].
  static AlgebraicReal from_irreducible(IntPoly minpoly, const Rational& lo, const Rational& hi) {
    minpoly = primitive_part(minpoly);
    if (minpoly.degree() == 1) return AlgebraicReal(Rational(-minpoly.coeff(0), minpoly.coeff(1)));
    // Canonical interval: bisect [floor, floor + 1] until it isolates the root.
    SturmSequence sturm(minpoly);
    detail::Bisector b(minpoly, lo, hi);
    Integer n;
    while (true) {
      n = qhm::floor(b.lo());
      if (b.hi() <= Rational(n + 1)) break;
      b.step();
    }
    Rational clo(n), chi(n + 1);
    while (sturm.count_closed(clo, chi) != 1) {
      Rational mid = (clo + chi) / 2;
      if (sturm.count_closed(std::max(clo, b.lo()), std::min(mid, b.hi())) == 1) {
        chi = mid;
      } else {
        clo = mid;
      }
    }
    AlgebraicReal out;
    out.minpoly_ = std::move(minpoly);
    out.lo_ = std::move(clo);
    out.hi_ = std::move(chi);
    return out;
  }

  const IntPoly& minpoly() const { return minpoly_; }
  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  int degree() const { return minpoly_.degree(); }
  bool is_rational() const { return minpoly_.degree() == 1; }
  bool is_integer() const { return is_rational() && value_.get_den() == 1; }
  bool is_zero() const { return is_rational() && value_ == 0; }

  const Rational& rational_value() const {
    if (!is_rational()) throw std::domain_error("algebraic number is irrational");
    return value_;
  }

  /// An interval of width <= `width` containing the number.
  Interval approximate(const Rational& width) const {
    if (is_rational()) return {value_, value_};
    detail::Bisector b(minpoly_, lo_, hi_);
    while (b.hi() - b.lo() > width) b.step();
    return b.interval();
  }

  /// The isolating interval after `steps` bisections.
  Interval refined(int steps) const {
    if (is_rational()) return {value_, value_};
    detail::Bisector b(minpoly_, lo_, hi_);
    for (int i = 0; i < steps; ++i) b.step();
    return b.interval();
  }

  int sign() const {
    if (is_rational()) return sgn(value_);
    detail::Bisector b(minpoly_, lo_, hi_);
    while (true) {
      if (b.lo() >= 0) return 1;
      if (b.hi() <= 0) return -1;
      b.step();
    }
  }

  Integer floor() const {
    if (is_rational()) return qhm::floor(value_);
    detail::Bisector b(minpoly_, lo_, hi_);
    while (true) {
      Integer fl = qhm::floor(b.lo());
      if (b.hi() <= Rational(fl + 1)) return fl;
      b.step();
    }
  }

  double to_double() const {
    if (is_rational()) return value_.get_d();
    Interval i = approximate(Rational(1, Integer(1) << 60));
    return Rational((i.lo + i.hi) / 2).get_d();
  }

  /// Truncated decimal expansion with `digits` fractional digits.
  std::string to_decimal(int digits) const {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    Interval i = approximate(Rational(1, scale * 100));
    Integer scaled = qhm::floor(Rational(i.lo * scale));
    bool negative = scaled < 0 && !(i.lo >= 0);
    if (negative) scaled = -scaled;
    std::string s = scaled.get_str();
    if (static_cast<int>(s.size()) <= digits) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    return negative ? "-" + s : s;
  }

  /// Parseable form: a rational literal or root(poly; lo, hi).
  std::string to_string() const {
    if (is_rational()) return qhm::to_string(value_);
    return "root(" + qhm::to_string(minpoly_) + "; " + qhm::to_string(lo_) + ", " + qhm::to_string(hi_) + ")";
  }

  AlgebraicReal operator-() const {
    if (is_rational()) return AlgebraicReal(Rational(-value_));
    std::vector<Integer> c = minpoly_.coeffs();
    for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return from_irreducible(IntPoly(std::move(c)), Rational(-hi_), Rational(-lo_));
  }

  AlgebraicReal inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (is_rational()) return AlgebraicReal(Rational(1 / value_));
    detail::Bisector b(minpoly_, lo_, hi_);
    while (!(b.lo() > 0 || b.hi() < 0)) b.step();
    return from_irreducible(reverse(minpoly_), Rational(1 / b.hi()), Rational(1 / b.lo()));
  }

  friend AlgebraicReal operator+(const AlgebraicReal& a, const AlgebraicReal& b);
  friend AlgebraicReal operator*(const AlgebraicReal& a, const AlgebraicReal& b);
  friend AlgebraicReal operator-(const AlgebraicReal& a, const AlgebraicReal& b) { return a + (-b); }
  friend AlgebraicReal operator/(const AlgebraicReal& a, const AlgebraicReal& b) { return a * b.inverse(); }
  AlgebraicReal& operator+=(const AlgebraicReal& o) { return *this = *this + o; }
  AlgebraicReal& operator-=(const AlgebraicReal& o) { return *this = *this - o; }
  AlgebraicReal& operator*=(const AlgebraicReal& o) { return *this = *this * o; }
  AlgebraicReal& operator/=(const AlgebraicReal& o) { return *this = *this / o; }

  /// Exact comparison. Equal numbers share the canonical minimal polynomial,
  /// so equality reduces to locating a common root.
  friend std::strong_ordering operator<=>(const AlgebraicReal& a, const AlgebraicReal& b) {
    if (a.is_rational() && b.is_rational()) {
      int c = cmp(a.value_, b.value_);
      return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    const bool same_poly = a.minpoly_ == b.minpoly_;
    std::optional<SturmSequence> sturm;
    if (same_poly) sturm.emplace(a.minpoly_);
    Interval ia = a.refined(0), ib = b.refined(0);
    detail::Bisector ba(a.minpoly_, ia.lo, ia.hi), bb(b.minpoly_, ib.lo, ib.hi);
    while (true) {
      Interval x = a.is_rational() ? Interval{a.value_, a.value_} : ba.interval();
      Interval y = b.is_rational() ? Interval{b.value_, b.value_} : bb.interval();
      if (x.hi < y.lo) return std::strong_ordering::less;
      if (y.hi < x.lo) return std::strong_ordering::greater;
      if (same_poly) {
        Rational lo = std::max(x.lo, y.lo), hi = std::min(x.hi, y.hi);
        if (sturm->count_closed(lo, hi) == 1) return std::strong_ordering::equal;
      }
      if (!a.is_rational()) ba.step();
      if (!b.is_rational()) bb.step();
    }
  }

  /// Representations are canonical, so equality is structural.
  friend bool operator==(const AlgebraicReal& a, const AlgebraicReal& b) {
    return a.minpoly_ == b.minpoly_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  friend std::ostream& operator<<(std::ostream& os, const AlgebraicReal& a) { return os << a.to_string(); }

 private:
  IntPoly minpoly_;
  Rational lo_, hi_;
  Rational value_;  // meaningful only when rational
};

namespace detail {

/// Integer polynomial through the points (k, values[k]), k = 0..n-1.
inline IntPoly interpolate(const std::vector<Integer>& values) {
  const std::size_t n = values.size();
  std::vector<Rational> dd(values.begin(), values.end());
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t i = n - 1; i >= level; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / Rational(static_cast<long>(level));
      if (i == level) break;
    }
  RatPoly acc;
  for (std::size_t k = n; k-- > 0;) {
    acc = acc * RatPoly{Rational(-static_cast<long>(k)), Rational(1)} + RatPoly::constant(dd[k]);
  }
  std::vector<Integer> out;
  for (const auto& c : acc.coeffs()) {
    if (c.get_den() != 1) throw std::logic_error("interpolate: non-integral resultant");
    out.push_back(c.get_num());
  }
  return IntPoly(std::move(out));
}

inline Integer integral(const Rational& r) {
  if (r.get_den() != 1) throw std::logic_error("expected an integer");
  return r.get_num();
}

/// res_y(f(x - y), g(y)): its roots are all sums of a root of f and one of g.
inline IntPoly sum_annihilator(const IntPoly& f, const IntPoly& g) {
  const int n = f.degree() * g.degree();
  std::vector<Integer> values;
  for (int x0 = 0; x0 <= n; ++x0) {
    RatPoly shifted = compose_linear(f, Rational(-1), Rational(x0));
    values.push_back(integral(resultant(shifted, to_rational(g))));
  }
  return interpolate(values);
}

/// res_y(f(y), y^m g(x/y)): roots are all products of roots of f and g.
inline IntPoly product_annihilator(const IntPoly& f, const IntPoly& g) {
  const int m = g.degree();
  const int n = f.degree() * m;
  std::vector<Integer> values;
  for (int x0 = 0; x0 <= n; ++x0) {
    std::vector<Integer> c(static_cast<std::size_t>(m) + 1);
    Integer pw = 1;
    for (int i = 0; i <= m; ++i) {
      c[static_cast<std::size_t>(m - i)] = g.coeff(static_cast<std::size_t>(i)) * pw;
      pw *= x0;
    }
    values.push_back(integral(resultant(to_rational(f), to_rational(IntPoly(std::move(c))))));
  }
  return interpolate(values);
}

/// Picks the root of `annihilator` that a shrinking sequence of enclosures
/// converges to. `approx(k)` must contain the target for every k and its
/// width must tend to zero.
inline AlgebraicReal select_root(const IntPoly& annihilator, const std::function<Interval(int)>& approx) {
  std::vector<IntPoly> factors = irreducible_factors(annihilator);
  std::vector<SturmSequence> sturm;
  for (const auto& f : factors) sturm.emplace_back(f);
  for (int k = 0;; ++k) {
    Interval box = approx(k);
    int total = 0;
    std::size_t owner = 0;
    for (std::size_t i = 0; i < factors.size() && total <= 1; ++i) {
      int c = sturm[i].count_closed(box.lo, box.hi);
      if (c > 0) owner = i;
      total += c;
    }
    if (total == 1) return AlgebraicReal::from_irreducible(factors[owner], box.lo, box.hi);
    if (total == 0) throw std::logic_error("select_root: enclosure lost the root");
  }
}

inline AlgebraicReal shift(const AlgebraicReal& a, const Rational& v) {
  IntPoly f = primitive_part(compose_linear(a.minpoly(), Rational(1), Rational(-v)));
  return AlgebraicReal::from_irreducible(std::move(f), a.lo() + v, a.hi() + v);
}

inline AlgebraicReal scale(const AlgebraicReal& a, const Rational& v) {
  IntPoly f = primitive_part(compose_linear(a.minpoly(), Rational(1 / v), Rational(0)));
  Rational lo = a.lo() * v, hi = a.hi() * v;
  if (v < 0) std::swap(lo, hi);
  return AlgebraicReal::from_irreducible(std::move(f), lo, hi);
}

}  // namespace detail

inline AlgebraicReal operator+(const AlgebraicReal& a, const AlgebraicReal& b) {
  if (a.is_rational() && b.is_rational()) return AlgebraicReal(Rational(a.value_ + b.value_));
  if (a.is_rational()) return detail::shift(b, a.value_);
  if (b.is_rational()) return detail::shift(a, b.value_);
  IntPoly ann = detail::sum_annihilator(a.minpoly_, b.minpoly_);
  detail::Bisector ba(a.minpoly_, a.lo_, a.hi_), bb(b.minpoly_, b.lo_, b.hi_);
  return detail::select_root(ann, [&](int k) {
    if (k > 0) {
      ba.step();
      bb.step();
    }
    return ba.interval() + bb.interval();
  });
}

inline AlgebraicReal operator*(const AlgebraicReal& a, const AlgebraicReal& b) {
  if (a.is_zero() || b.is_zero()) return AlgebraicReal(0);
  if (a.is_rational() && b.is_rational()) return AlgebraicReal(Rational(a.value_ * b.value_));
  if (a.is_rational()) return detail::scale(b, a.value_);
  if (b.is_rational()) return detail::scale(a, b.value_);
  IntPoly ann = detail::product_annihilator(a.minpoly_, b.minpoly_);
  detail::Bisector ba(a.minpoly_, a.lo_, a.hi_), bb(b.minpoly_, b.lo_, b.hi_);
  return detail::select_root(ann, [&](int k) {
    if (k > 0) {
      ba.step();
      bb.step();
    }
    return ba.interval() * bb.interval();
  });
}

inline int sign(const AlgebraicReal& a) { return a.sign(); }
inline Integer floor(const AlgebraicReal& a) { return a.floor(); }
inline AlgebraicReal abs(const AlgebraicReal& a) { return a.sign() < 0 ? -a : a; }

/// Non-negative square root.
inline AlgebraicReal sqrt(const AlgebraicReal& a) {
  int s = a.sign();
  if (s < 0) throw std::domain_error("sqrt of a negative number");
  if (s == 0) return AlgebraicReal(0);
  if (a.is_rational()) {
    if (auto r = exact_root(a.rational_value(), 2)) return AlgebraicReal(*r);
  }
  // f(x^2) annihilates both square roots.
  std::vector<Integer> c(2 * a.minpoly().coeffs().size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.minpoly().coeffs().size(); ++i) c[2 * i] = a.minpoly().coeffs()[i];
  IntPoly ann(std::move(c));
  Interval base = a.refined(0);
  detail::Bisector b(a.minpoly(), base.lo, base.hi);
  auto positive = [&] { return a.is_rational() || b.lo() > 0; };
  while (!positive()) b.step();
  return detail::select_root(ann, [&](int k) {
    if (k > 0 && !a.is_rational()) b.step();
    Rational lo = a.is_rational() ? a.rational_value() : b.lo();
    Rational hi = a.is_rational() ? a.rational_value() : b.hi();
    Integer prec = Integer(1) << (k + 4);
    Integer p2 = prec * prec;
    Rational l(isqrt(qhm::floor(Rational(lo * p2))), prec);
    Rational h(isqrt(ceil(Rational(hi * p2))) + 1, prec);
    l.canonicalize();
    h.canonicalize();
    return Interval{l, h};
  });
}

}  // namespace qhm
