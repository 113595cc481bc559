#pragma once

// Continued fractions, GL(2,Z) equivalence of reals with witness matrices,
// fractional-linear GL(2,Z) and GL(3,Z) actions, and words in A1, A2.

#include <qhm/field.hpp>

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qhm {

/// N x N integer matrix with determinant ±1.
template <std::size_t N>
class Unimodular {
 public:
  using Rows = std::array<std::array<Integer, N>, N>;

  Unimodular() {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m_[i][j] = i == j ? 1 : 0;
  }

  explicit Unimodular(const Rows& m) : m_(m) {
    Integer d = det();
    if (d != 1 && d != -1) throw std::invalid_argument("matrix is not unimodular (det " + d.get_str() + ")");
  }

  Unimodular(std::initializer_list<std::initializer_list<long>> rows) {
    if (rows.size() != N) throw std::invalid_argument("wrong number of rows");
    std::size_t i = 0;
    for (const auto& r : rows) {
      if (r.size() != N) throw std::invalid_argument("wrong number of columns");
      std::size_t j = 0;
      for (long v : r) m_[i][j++] = v;
      ++i;
    }
    Integer d = det();
    if (d != 1 && d != -1) throw std::invalid_argument("matrix is not unimodular (det " + d.get_str() + ")");
  }

  /// Checked construction from arbitrary integer rows.
  static std::optional<Unimodular> from_rows(const std::vector<std::vector<Integer>>& rows) {
    if (rows.size() != N) return std::nullopt;
    Rows m;
    for (std::size_t i = 0; i < N; ++i) {
      if (rows[i].size() != N) return std::nullopt;
      for (std::size_t j = 0; j < N; ++j) m[i][j] = rows[i][j];
    }
    Integer d = raw_det(m);
    if (d != 1 && d != -1) return std::nullopt;
    Unimodular u;
    u.m_ = m;
    return u;
  }

  const Integer& operator()(std::size_t i, std::size_t j) const { return m_[i][j]; }
  const Rows& rows() const { return m_; }

  Integer det() const { return raw_det(m_); }

  friend Unimodular operator*(const Unimodular& a, const Unimodular& b) {
    Unimodular out;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        Integer s = 0;
        for (std::size_t k = 0; k < N; ++k) s += a.m_[i][k] * b.m_[k][j];
        out.m_[i][j] = s;
      }
    return out;
  }

  Unimodular inverse() const {
    // adj(A) / det(A), with det = ±1.
    Unimodular out;
    const Integer d = det();
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        Integer c = cofactor(j, i);
        out.m_[i][j] = d * c;
      }
    return out;
  }

  friend bool operator==(const Unimodular& a, const Unimodular& b) { return a.m_ == b.m_; }

  std::string to_string() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < N; ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < N; ++j) os << (j ? " " : "") << m_[i][j];
    }
    os << ')';
    return os.str();
  }

  std::vector<std::vector<Integer>> to_vectors() const {
    std::vector<std::vector<Integer>> out(N);
    for (std::size_t i = 0; i < N; ++i) out[i].assign(m_[i].begin(), m_[i].end());
    return out;
  }

 private:
  Rows m_;

  static Integer raw_det(const Rows& m) {
    if constexpr (N == 1) {
      return m[0][0];
    } else if constexpr (N == 2) {
      return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    } else {
      Integer s = 0;
      for (std::size_t j = 0; j < N; ++j) {
        Integer c = minor_det(m, 0, j);
        s += (j % 2 ? -1 : 1) * m[0][j] * c;
      }
      return s;
    }
  }

  static Integer minor_det(const Rows& m, std::size_t r, std::size_t c) {
    std::vector<std::vector<Integer>> sub;
    for (std::size_t i = 0; i < N; ++i) {
      if (i == r) continue;
      std::vector<Integer> row;
      for (std::size_t j = 0; j < N; ++j)
        if (j != c) row.push_back(m[i][j]);
      sub.push_back(std::move(row));
    }
    return vec_det(sub);
  }

  static Integer vec_det(const std::vector<std::vector<Integer>>& a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    if (n == 1) return a[0][0];
    if (n == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    Integer s = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::vector<Integer>> sub;
      for (std::size_t i = 1; i < n; ++i) {
        std::vector<Integer> row;
        for (std::size_t k = 0; k < n; ++k)
          if (k != j) row.push_back(a[i][k]);
        sub.push_back(std::move(row));
      }
      s += (j % 2 ? -1 : 1) * a[0][j] * vec_det(sub);
    }
    return s;
  }

  Integer cofactor(std::size_t r, std::size_t c) const {
    Integer md = minor_det(m_, r, c);
    return (r + c) % 2 ? Integer(-md) : md;
  }
};

using GL2 = Unimodular<2>;
using GL3 = Unimodular<3>;

// ---------------------------------------------------------------------------
// Continued fractions

struct CFExpansion {
  std::vector<Integer> quotients;
  /// (start index, length) of the period, for quadratic irrationals.
  std::optional<std::pair<std::size_t, std::size_t>> period;
  bool exact = false;

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    const std::size_t shown = period ? period->first : quotients.size();
    for (std::size_t i = 0; i < shown; ++i) {
      os << quotients[i];
      if (i == 0 && (i + 1 < shown || period)) {
        os << "; ";
      } else if (i + 1 < shown) {
        os << ", ";
      }
    }
    if (period) {
      if (shown > 1) os << ", ";
      os << "period (";
      for (std::size_t i = 0; i < period->second; ++i) os << (i ? ", " : "") << quotients[period->first + i];
      os << ')';
    } else if (!exact) {
      os << ", ...";
    }
    os << ']';
    return os.str();
  }
};

/// x = (P + sqrt(D)) / Q with Q | D - P^2.
struct Surd {
  Integer p, q, d;

  static Surd from(const AlgebraicReal& x) {
    if (x.degree() != 2) throw std::invalid_argument("not a quadratic irrational");
    const IntPoly& f = x.minpoly();
    Integer a = f.coeff(2), b = f.coeff(1), c = f.coeff(0);
    Integer disc = b * b - 4 * a * c;
    // Larger root is (-b + sqrt)/(2a) since a > 0.
    AlgebraicReal centre(Rational(-b, 2 * a));
    if (x > centre) return {Integer(-b), Integer(2 * a), disc};
    return {b, Integer(-2 * a), disc};
  }

  Integer floor_value() const {
    Integer s = isqrt(d);
    return q > 0 ? floor_div(p + s, q) : floor_div(p + s + 1, q);
  }

  /// 1 / (x - a).
  Surd next(const Integer& a) const {
    Integer p2 = a * q - p;
    Integer q2 = (d - p2 * p2) / q;
    return {p2, q2, d};
  }

  bool operator<(const Surd& o) const { return p != o.p ? p < o.p : q < o.q; }
};

inline CFExpansion cf_expand(const AlgebraicReal& x, int max_terms = 64) {
  if (max_terms < 1) throw std::invalid_argument("max_terms must be at least 1");
  CFExpansion out;
  if (x.is_rational()) {
    Integer num = x.rational_value().get_num(), den = x.rational_value().get_den();
    while (den != 0) {
      Integer a = floor_div(num, den);
      out.quotients.push_back(a);
      Integer r = num - a * den;
      num = den;
      den = r;
    }
    out.exact = true;
    return out;
  }
  if (x.degree() == 2) {
    // Complete quotients are finitely many surd states; the first repeat closes the period.
    std::map<Surd, std::size_t> seen;
    Surd s = Surd::from(x);
    while (true) {
      auto it = seen.find(s);
      if (it != seen.end()) {
        std::size_t start = it->second, len = out.quotients.size() - it->second;
        if (start == 0) {
          // Keep a_0 outside the displayed period: a_len = a_0.
          out.quotients.push_back(out.quotients[0]);
          start = 1;
        }
        out.period = std::make_pair(start, len);
        out.exact = true;
        return out;
      }
      seen.emplace(s, out.quotients.size());
      Integer a = s.floor_value();
      out.quotients.push_back(a);
      s = s.next(a);
    }
  }
  AlgebraicReal y = x;
  for (int i = 0; i < max_terms; ++i) {
    Integer a = y.floor();
    out.quotients.push_back(a);
    y = (y - AlgebraicReal(a)).inverse();
  }
  out.exact = false;
  return out;
}

/// [[p_{k-1}, p_{k-2}], [q_{k-1}, q_{k-2}]] for the prefix a_0..a_{k-1}; x = M(k)·x_k.
inline GL2 convergent_matrix(const std::vector<Integer>& quotients, std::size_t k) {
  GL2 m;
  for (std::size_t i = 0; i < k; ++i) {
    GL2::Rows step{{{quotients[i], 1}, {1, 0}}};
    m = m * GL2(step);
  }
  return m;
}

/// Fractional-linear action (ax + b) / (cx + d).
inline AlgebraicReal gl2_act(const GL2& m, const AlgebraicReal& x) {
  const Integer &a = m(0, 0), &b = m(0, 1), &c = m(1, 0), &d = m(1, 1);
  if (c == 0) return (AlgebraicReal(a) * x + AlgebraicReal(b)) / AlgebraicReal(d);
  AlgebraicReal denom = AlgebraicReal(c) * x + AlgebraicReal(d);
  if (denom.is_zero()) throw std::domain_error("gl2_act: vanishing denominator");
  // a/c - det / (c (cx + d)) avoids a general product.
  return AlgebraicReal(Rational(a, c)) - AlgebraicReal(Rational(m.det(), c)) * denom.inverse();
}

/// Value of an exact expansion.
inline AlgebraicReal cf_value(const CFExpansion& cf) {
  if (!cf.exact) throw std::invalid_argument("cf_value needs an exact expansion");
  if (!cf.period) {
    Rational v = cf.quotients.back();
    for (std::size_t i = cf.quotients.size() - 1; i-- > 0;) v = Rational(cf.quotients[i]) + 1 / v;
    return AlgebraicReal(v);
  }
  auto [start, len] = *cf.period;
  // The purely periodic tail y satisfies y = P·y with P the period's convergent matrix.
  std::vector<Integer> block(cf.quotients.begin() + static_cast<long>(start),
                             cf.quotients.begin() + static_cast<long>(start + len));
  GL2 p = convergent_matrix(block, len);
  // c y^2 + (d - a) y - b = 0, and y > 1 is the larger root.
  IntPoly f{Integer(-p(0, 1)), Integer(p(1, 1) - p(0, 0)), p(1, 0)};
  auto roots = isolate_real_roots(squarefree_part(f));
  auto [lo, hi] = roots.back();
  AlgebraicReal y = AlgebraicReal::from_root(f, lo, hi);
  return gl2_act(convergent_matrix(cf.quotients, start), y);
}

enum class SerretKind { Equivalent, NotEquivalent, Unknown };

struct SerretResult {
  SerretKind kind = SerretKind::Unknown;
  std::optional<GL2> witness;  // b = witness · a
  std::string reason;
};

namespace detail {

inline std::size_t min_rotation(const std::vector<Integer>& w) {
  std::size_t best = 0;
  const std::size_t n = w.size();
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Integer& x = w[(r + k) % n];
      const Integer& y = w[(best + k) % n];
      if (x != y) {
        if (x < y) best = r;
        break;
      }
    }
  }
  return best;
}

inline GL2 rational_matrix(const Rational& v) {
  // [[p, r], [q, s]] with ps - rq = 1 sends infinity to p/q.
  const Integer& p = v.get_num();
  const Integer& q = v.get_den();
  ExtendedGcd e = xgcd(p, q);  // e.s p + e.t q = 1
  GL2::Rows m{{{p, Integer(-e.t)}, {q, e.s}}};
  return GL2(m);
}

}  // namespace detail

inline SerretResult serret_equivalent(const AlgebraicReal& a, const AlgebraicReal& b, int budget = 64) {
  SerretResult out;
  auto verified = [&](const GL2& w, const std::string& how) {
    if (!(gl2_act(w, a) == b)) throw std::logic_error("serret_equivalent: witness failed verification");
    out.kind = SerretKind::Equivalent;
    out.witness = w;
    out.reason = how;
    return out;
  };
  if (a.is_rational() && b.is_rational()) {
    GL2 w = detail::rational_matrix(b.rational_value()) * detail::rational_matrix(a.rational_value()).inverse();
    return verified(w, "both rational");
  }
  if (a.is_rational() != b.is_rational()) {
    out.kind = SerretKind::NotEquivalent;
    out.reason = "exactly one number is rational";
    return out;
  }
  if (a.degree() != b.degree()) {
    out.kind = SerretKind::NotEquivalent;
    out.reason = "degrees differ (" + std::to_string(a.degree()) + " vs " + std::to_string(b.degree()) + ")";
    return out;
  }
  if (a.degree() == 2) {
    CFExpansion ca = cf_expand(a), cb = cf_expand(b);
    auto [pa, la] = *ca.period;
    auto [pb, lb] = *cb.period;
    std::vector<Integer> wa(ca.quotients.begin() + static_cast<long>(pa), ca.quotients.end());
    std::vector<Integer> wb(cb.quotients.begin() + static_cast<long>(pb), cb.quotients.end());
    std::size_t ra = detail::min_rotation(wa), rb = detail::min_rotation(wb);
    bool same = la == lb;
    for (std::size_t k = 0; same && k < la; ++k) same = wa[(ra + k) % la] == wb[(rb + k) % lb];
    if (!same) {
      out.kind = SerretKind::NotEquivalent;
      out.reason = "periods are not cyclic rotations of each other";
      return out;
    }
    std::size_t i = pa + ra, j = pb + rb;
    // Extend the quotient lists so both prefixes exist.
    auto quotient = [](const CFExpansion& c, std::size_t k) {
      auto [s, l] = *c.period;
      return k < c.quotients.size() ? c.quotients[k] : c.quotients[s + (k - s) % l];
    };
    std::vector<Integer> qa, qb;
    for (std::size_t k = 0; k < i; ++k) qa.push_back(quotient(ca, k));
    for (std::size_t k = 0; k < j; ++k) qb.push_back(quotient(cb, k));
    GL2 w = convergent_matrix(qb, j) * convergent_matrix(qa, i).inverse();
    return verified(w, "common periodic tail");
  }
  // Higher degree: look for equal complete quotients within the budget.
  std::vector<AlgebraicReal> xa{a}, xb{b};
  std::vector<Integer> qa, qb;
  for (int k = 0; k < budget; ++k) {
    qa.push_back(xa.back().floor());
    xa.push_back((xa.back() - AlgebraicReal(qa.back())).inverse());
    qb.push_back(xb.back().floor());
    xb.push_back((xb.back() - AlgebraicReal(qb.back())).inverse());
  }
  for (std::size_t s = 0; s < xa.size() + xb.size(); ++s)
    for (std::size_t i = 0; i <= s && i < xa.size(); ++i) {
      std::size_t j = s - i;
      if (j >= xb.size()) continue;
      if (xa[i] == xb[j]) {
        GL2 w = convergent_matrix(qb, j) * convergent_matrix(qa, i).inverse();
        return verified(w, "equal complete quotients at positions " + std::to_string(i) + ", " + std::to_string(j));
      }
    }
  out.kind = SerretKind::Unknown;
  out.reason = "no common tail within " + std::to_string(budget) + " terms";
  return out;
}

// ---------------------------------------------------------------------------
// GL(3,Z) action on (μ, ν)

/// (2μ', 2ν', 1) ∝ A (2μ, 2ν, 1) inside a given field.
inline std::pair<RatVec, RatVec> gl3_act_coords(const GL3& m, const FieldContext& k, const RatVec& mu, const RatVec& nu) {
  RatVec v[3] = {k.scale(mu, Rational(2)), k.scale(nu, Rational(2)), k.one()};
  RatVec row[3];
  for (std::size_t i = 0; i < 3; ++i) {
    row[i] = k.zero();
    for (std::size_t j = 0; j < 3; ++j) row[i] = k.add(row[i], k.scale(v[j], Rational(m(i, j))));
  }
  if (is_zero(row[2])) throw std::domain_error("gl3_act: vanishing denominator");
  RatVec inv = k.inverse(k.scale(row[2], Rational(2)));
  return {k.mul(row[0], inv), k.mul(row[1], inv)};
}

inline std::pair<AlgebraicReal, AlgebraicReal> gl3_act(const GL3& m, const AlgebraicReal& mu, const AlgebraicReal& nu) {
  CommonField cf = common_field({mu, nu});
  auto [a, b] = gl3_act_coords(m, cf.field, cf.coords[0], cf.coords[1]);
  return {cf.field.to_real(a), cf.field.to_real(b)};
}

// ---------------------------------------------------------------------------
// Words in A1 = (1 1; 0 1) and A2 = (0 1; 1 0)

struct Letter {
  int generator = 1;  // 1 or 2
  Integer exponent = 1;

  bool operator==(const Letter& o) const { return generator == o.generator && exponent == o.exponent; }
};

using Word = std::vector<Letter>;

inline GL2 generator_power(const Letter& l) {
  if (l.generator == 1) {
    GL2::Rows m{{{1, l.exponent}, {0, 1}}};
    return GL2(m);
  }
  return (l.exponent % 2 == 0) ? GL2() : GL2{{0, 1}, {1, 0}};
}

inline GL2 evaluate(const Word& w) {
  GL2 m;
  for (const auto& l : w) m = m * generator_power(l);
  return m;
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "I";
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << 'A' << w[i].generator;
    if (w[i].exponent != 1) os << '^' << w[i].exponent;
  }
  return os.str();
}

namespace detail {

inline void push_letter(Word& w, int gen, const Integer& e) {
  if (e == 0) return;
  if (!w.empty() && w.back().generator == gen) {
    w.back().exponent += e;
    if (gen == 2) w.back().exponent %= 2;
    if (w.back().exponent == 0) w.pop_back();
    return;
  }
  if (gen == 2 && e % 2 == 0) return;
  w.push_back({gen, gen == 2 ? Integer(1) : e});
}

inline void append(Word& w, const Word& tail) {
  for (const auto& l : tail) push_letter(w, l.generator, l.exponent);
}

}  // namespace detail

/// A word in A1^k and A2 whose product is `a`; verified before returning.
inline Word gl2_decompose(const GL2& a) {
  // Left-multiply by A1^-k and A2 until the first column is (±1, 0).
  Integer m00 = a(0, 0), m01 = a(0, 1), m10 = a(1, 0), m11 = a(1, 1);
  Word ops;  // applied on the left, in order
  while (m10 != 0) {
    Integer k = floor_div(m00, m10);
    if (k != 0) {
      m00 -= k * m10;
      m01 -= k * m11;
      ops.push_back({1, Integer(-k)});
    }
    std::swap(m00, m10);
    std::swap(m01, m11);
    ops.push_back({2, 1});
  }
  // Remaining upper-triangular D·A1^k with D = diag(m00, m11).
  const Word s{{1, -1}, {2, 1}, {1, 1}, {2, 1}, {1, -1}};  // (0 -1; 1 0)
  Word diag;
  if (m00 == 1 && m11 == -1) {
    diag.push_back({2, 1});
    detail::append(diag, s);
  } else if (m00 == -1 && m11 == 1) {
    detail::append(diag, s);
    detail::append(diag, s);
    detail::push_letter(diag, 2, 1);
    detail::append(diag, s);
  } else if (m00 == -1 && m11 == -1) {
    detail::append(diag, s);
    detail::append(diag, s);
  }
  Word out;
  // a = ops_1^-1 ... ops_n^-1 · D · A1^k
  for (const auto& l : ops) detail::push_letter(out, l.generator, l.generator == 1 ? Integer(-l.exponent) : Integer(1));
  detail::append(out, diag);
  detail::push_letter(out, 1, Integer(m01 * m00));
  if (!(evaluate(out) == a)) throw std::logic_error("gl2_decompose: word does not reproduce the matrix");
  return out;
}

}  // namespace qhm
