#pragma once

// Arbitrary precision integers and rationals (GMP) plus the handful of
// number-theoretic helpers the rest of the library leans on.

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qhm {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer floor(const Rational& r) { return floor_div(r.get_num(), r.get_den()); }

inline Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

/// s*a + t*b = g with g = gcd(a, b) >= 0.
struct ExtendedGcd {
  Integer g, s, t;
};

inline ExtendedGcd xgcd(const Integer& a, const Integer& b) {
  ExtendedGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer isqrt(const Integer& n) {
  if (n < 0) throw std::domain_error("isqrt of negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Integer& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

/// Exact n-th root of a rational, if one exists in Q.
inline std::optional<Rational> exact_root(const Rational& v, unsigned n) {
  if (n == 0) return std::nullopt;
  if (v < 0 && n % 2 == 0) return std::nullopt;
  Integer num, den;
  if (mpz_root(num.get_mpz_t(), v.get_num_mpz_t(), n) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), v.get_den_mpz_t(), n) == 0) return std::nullopt;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Integer& v) { return v.get_str(); }

inline std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

inline int sign(const Integer& v) { return sgn(v); }
inline int sign(const Rational& v) { return sgn(v); }

inline Integer abs_value(const Integer& v) { return v < 0 ? Integer(-v) : v; }

/// Parses "p", "p/q" or a plain decimal "a.b" (optionally signed) exactly.
/// n/d in lowest terms.
inline Rational ratio(const Integer& n, const Integer& d) {
  if (d == 0) throw std::domain_error("zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'"); };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  auto digits = [&](std::string& out) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out.push_back(text[i++]);
    return i > start;
  };
  std::string whole;
  if (!digits(whole)) fail();
  Rational value;
  if (i < text.size() && text[i] == '.') {
    ++i;
    std::string frac;
    digits(frac);
    Integer num(whole + frac, 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    value = Rational(num, den);
  } else if (i < text.size() && text[i] == '/') {
    ++i;
    std::string d;
    if (!digits(d)) fail();
    Integer den(d, 10);
    if (den == 0) throw std::domain_error("zero denominator in rational literal");
    value = Rational(Integer(whole, 10), den);
  } else {
    value = Rational(Integer(whole, 10));
  }
  if (i != text.size()) fail();
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace qhm
