#pragma once

// Real number fields Q(θ) with elements stored as rational coordinate
// vectors in the power basis 1, θ, ..., θ^(d-1).

#include <qhm/algebraic.hpp>
#include <qhm/linalg.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhm {

class FieldContext {
 public:
  /// Q itself, presented as Q(0).
  FieldContext() : FieldContext(AlgebraicReal(0)) {}

  explicit FieldContext(const AlgebraicReal& theta) {
    auto data = std::make_shared<Data>();
    data->theta = theta;
    data->minpoly = theta.minpoly();
    data->d = theta.degree();
    const int d = data->d;
    const Rational lead(data->minpoly.lead());
    // θ^d = -(F_0 + ... + F_{d-1} θ^{d-1}) / F_d, then shift upward.
    RatVec top(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) top[static_cast<std::size_t>(i)] = -Rational(data->minpoly.coeff(static_cast<std::size_t>(i))) / lead;
    if (d > 1) {
      data->high_powers.push_back(top);
      for (int k = d + 1; k <= 2 * d - 2; ++k) {
        const RatVec& prev = data->high_powers.back();
        RatVec next(static_cast<std::size_t>(d), Rational(0));
        for (int i = 1; i < d; ++i) next[static_cast<std::size_t>(i)] = prev[static_cast<std::size_t>(i - 1)];
        const Rational& carry = prev[static_cast<std::size_t>(d - 1)];
        if (carry != 0)
          for (int i = 0; i < d; ++i) next[static_cast<std::size_t>(i)] += carry * top[static_cast<std::size_t>(i)];
        data->high_powers.push_back(std::move(next));
      }
    }
    data_ = std::move(data);
  }

  int degree() const { return data_->d; }
  std::size_t size() const { return static_cast<std::size_t>(data_->d); }
  const IntPoly& minpoly() const { return data_->minpoly; }
  const AlgebraicReal& theta() const { return data_->theta; }

  friend bool operator==(const FieldContext& a, const FieldContext& b) {
    if (a.data_ == b.data_) return true;
    return a.minpoly() == b.minpoly() && a.theta() == b.theta();
  }

  RatVec zero() const { return RatVec(size(), Rational(0)); }
  RatVec from_rational(const Rational& v) const {
    RatVec out = zero();
    out[0] = v;
    return out;
  }
  RatVec one() const { return from_rational(Rational(1)); }
  RatVec theta_vector() const {
    if (degree() == 1) return from_rational(theta().rational_value());
    RatVec out = zero();
    out[1] = 1;
    return out;
  }

  RatVec add(const RatVec& a, const RatVec& b) const {
    check(a);
    check(b);
    RatVec out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
  }
  RatVec sub(const RatVec& a, const RatVec& b) const {
    check(a);
    check(b);
    RatVec out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
  }
  RatVec scale(const RatVec& a, const Rational& s) const {
    check(a);
    RatVec out = a;
    for (auto& x : out) x *= s;
    return out;
  }
  RatVec neg(const RatVec& a) const { return scale(a, Rational(-1)); }

  RatVec mul(const RatVec& a, const RatVec& b) const {
    check(a);
    check(b);
    const std::size_t d = size();
    std::vector<Rational> prod(2 * d - 1, Rational(0));
    for (std::size_t i = 0; i < d; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < d; ++j)
        if (b[j] != 0) prod[i + j] += a[i] * b[j];
    }
    return reduce(prod);
  }

  RatVec power(const RatVec& a, unsigned n) const {
    RatVec result = one(), base = a;
    while (n > 0) {
      if (n & 1U) result = mul(result, base);
      n >>= 1U;
      if (n > 0) base = mul(base, base);
    }
    return result;
  }

  RatVec inverse(const RatVec& a) const {
    check(a);
    if (qhm::is_zero(a)) throw std::domain_error("division by zero");
    // Extended Euclid on (a(x), F(x)) over Q.
    RatPoly r0 = to_rational(minpoly());
    RatPoly r1(std::vector<Rational>(a.begin(), a.end()));
    RatPoly s0, s1 = RatPoly::constant(Rational(1));
    while (r1.degree() > 0) {
      auto [q, r] = divrem(r0, r1);
      RatPoly s = s0 - q * s1;
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s);
    }
    // r1 is a nonzero constant because F is irreducible.
    Rational c = r1.coeff(0);
    std::vector<Rational> v(s1.coeffs().begin(), s1.coeffs().end());
    for (auto& x : v) x /= c;
    v.resize(std::max(v.size(), size()), Rational(0));
    return reduce(v);
  }

  RatVec div(const RatVec& a, const RatVec& b) const { return mul(a, inverse(b)); }

  /// Rows i = 0..d-1 hold the coordinates of a·θ^i, so coords(a·b) = coords(b)·M.
  RatMatrix mult_matrix(const RatVec& a) const {
    RatMatrix m;
    RatVec row = a;
    const RatVec th = theta_vector();
    for (std::size_t i = 0; i < size(); ++i) {
      m.push_back(row);
      if (i + 1 < size()) row = mul(row, th);
    }
    return m;
  }

  /// Enclosure of the real value of `a` given an enclosure of θ.
  Interval enclose(const RatVec& a, const Interval& theta_box) const {
    check(a);
    Interval acc{a.back(), a.back()};
    for (std::size_t i = size() - 1; i-- > 0;) acc = acc * theta_box + Interval{a[i], a[i]};
    return acc;
  }

  /// The real number with coordinates `a`.
  AlgebraicReal to_real(const RatVec& a) const {
    check(a);
    bool rational = true;
    for (std::size_t i = 1; i < size(); ++i)
      if (a[i] != 0) rational = false;
    if (rational) return AlgebraicReal(a[0]);
    IntPoly m = minimal_polynomial(a);
    SturmSequence sturm(m);
    Interval t0 = theta().refined(0);
    detail::Bisector b(minpoly(), t0.lo, t0.hi);
    while (true) {
      Interval box = enclose(a, b.interval());
      if (sturm.count_closed(box.lo, box.hi) == 1) return AlgebraicReal::from_irreducible(m, box.lo, box.hi);
      b.step();
    }
  }

  /// Minimal polynomial of an element: the first Q-linear relation among its powers.
  IntPoly minimal_polynomial(const RatVec& a) const {
    check(a);
    const std::size_t d = size();
    std::vector<RatVec> reduced, combos;
    std::vector<std::size_t> pivots;
    RatVec pw = one();
    for (std::size_t k = 0; k <= d; ++k) {
      RatVec v = pw;
      RatVec comb(k + 1, Rational(0));
      comb[k] = 1;
      for (std::size_t i = 0; i < reduced.size(); ++i) {
        if (v[pivots[i]] == 0) continue;
        Rational f = v[pivots[i]] / reduced[i][pivots[i]];
        for (std::size_t j = 0; j < d; ++j) v[j] -= f * reduced[i][j];
        for (std::size_t j = 0; j < combos[i].size(); ++j) comb[j] -= f * combos[i][j];
      }
      if (qhm::is_zero(v)) return primitive_part(RatPoly(std::move(comb)));
      std::size_t p = 0;
      while (v[p] == 0) ++p;
      reduced.push_back(std::move(v));
      combos.push_back(std::move(comb));
      pivots.push_back(p);
      pw = mul(pw, a);
    }
    throw std::logic_error("minimal_polynomial: no relation found");
  }

  /// Evaluates the polynomial with coefficients `coeffs` (in the field) at `x`.
  RatVec horner(const RatVec& coeffs_in_old_basis, const RatVec& x) const {
    RatVec acc = from_rational(coeffs_in_old_basis.back());
    for (std::size_t i = coeffs_in_old_basis.size() - 1; i-- > 0;)
      acc = add(mul(acc, x), from_rational(coeffs_in_old_basis[i]));
    return acc;
  }

  /// True when F(θ) reduces to zero through the multiplication table.
  bool self_check() const {
    RatVec acc = zero();
    const RatVec th = theta_vector();
    RatVec pw = one();
    for (int i = 0; i <= degree(); ++i) {
      acc = add(acc, scale(pw, Rational(minpoly().coeff(static_cast<std::size_t>(i)))));
      pw = mul(pw, th);
    }
    return qhm::is_zero(acc);
  }

  std::string to_string() const { return "Q(" + theta().to_string() + ")"; }

 private:
  struct Data {
    AlgebraicReal theta;
    IntPoly minpoly;
    int d = 1;
    std::vector<RatVec> high_powers;  // θ^d .. θ^(2d-2)
  };

  void check(const RatVec& a) const {
    if (a.size() != size())
      throw std::invalid_argument("coordinate vector of length " + std::to_string(a.size()) + " in a degree " +
                                  std::to_string(size()) + " field");
  }

  RatVec reduce(const std::vector<Rational>& p) const {
    const std::size_t d = size();
    RatVec out(d, Rational(0));
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0) continue;
      if (i < d) {
        out[i] += p[i];
      } else {
        const RatVec& hp = data_->high_powers.at(i - d);
        for (std::size_t j = 0; j < d; ++j) out[j] += p[i] * hp[j];
      }
    }
    return out;
  }

  std::shared_ptr<const Data> data_;
};

namespace detail {

using KPoly = std::vector<RatVec>;  // ascending coefficients in a field

inline void kpoly_trim(KPoly& p) {
  while (!p.empty() && qhm::is_zero(p.back())) p.pop_back();
}

inline KPoly kpoly_mul(const FieldContext& k, const KPoly& a, const KPoly& b) {
  if (a.empty() || b.empty()) return {};
  KPoly out(a.size() + b.size() - 1, k.zero());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = k.add(out[i + j], k.mul(a[i], b[j]));
  kpoly_trim(out);
  return out;
}

inline KPoly kpoly_rem(const FieldContext& k, KPoly a, const KPoly& b) {
  const RatVec inv = k.inverse(b.back());
  kpoly_trim(a);
  while (a.size() >= b.size()) {
    RatVec f = k.mul(a.back(), inv);
    std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = k.sub(a[shift + j], k.mul(f, b[j]));
    a.pop_back();
    kpoly_trim(a);
  }
  return a;
}

/// Monic gcd over the field.
inline KPoly kpoly_gcd(const FieldContext& k, KPoly a, KPoly b) {
  kpoly_trim(a);
  kpoly_trim(b);
  while (!b.empty()) {
    KPoly r = kpoly_rem(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  RatVec inv = k.inverse(a.back());
  for (auto& c : a) c = k.mul(c, inv);
  return a;
}

}  // namespace detail

/// Result of enlarging a field by one element: the new field, the old
/// generator's coordinates in it, and the new element's coordinates.
struct Adjoined {
  FieldContext field;
  RatVec old_theta;
  RatVec element;
};

inline const std::vector<int>& primitive_multipliers() {
  static const std::vector<int> ks = [] {
    std::vector<int> v;
    for (int k = 1; k <= 10; ++k) {
      v.push_back(k);
      v.push_back(-k);
    }
    return v;
  }();
  return ks;
}

inline Adjoined adjoin(const FieldContext& base, const AlgebraicReal& e, int degree_cap = 64) {
  if (e.is_rational()) return {base, base.theta_vector(), base.from_rational(e.rational_value())};
  if (base.degree() == 1) {
    if (e.degree() > degree_cap) throw std::runtime_error("number field degree exceeds cap " + std::to_string(degree_cap));
    FieldContext f(e);
    return {f, f.from_rational(base.theta().rational_value()), f.theta_vector()};
  }
  const IntPoly& g = e.minpoly();
  const IntPoly& big_f = base.minpoly();
  for (int k : primitive_multipliers()) {
    AlgebraicReal t = base.theta() + AlgebraicReal(k) * e;
    if (t.degree() > degree_cap || t.degree() < std::max(base.degree(), e.degree())) continue;
    FieldContext field(t);
    // F(t - k y) and g(y) over Q(t) share exactly the root y = e when t is primitive.
    detail::KPoly lin{field.theta_vector(), field.from_rational(Rational(-k))};
    detail::KPoly acc;
    for (int i = big_f.degree(); i >= 0; --i) {
      acc = detail::kpoly_mul(field, acc, lin);
      RatVec c = field.from_rational(Rational(big_f.coeff(static_cast<std::size_t>(i))));
      if (acc.empty()) acc.push_back(field.zero());
      acc[0] = field.add(acc[0], c);
      detail::kpoly_trim(acc);
    }
    detail::KPoly gk;
    for (const auto& c : g.coeffs()) gk.push_back(field.from_rational(Rational(c)));
    detail::KPoly h = detail::kpoly_gcd(field, acc, gk);
    if (h.size() != 2) continue;
    RatVec e_vec = field.neg(h[0]);
    RatVec old_theta = field.sub(field.theta_vector(), field.scale(e_vec, Rational(k)));
    if (field.degree() == base.degree()) {
      // Same field: keep the existing generator and change basis.
      RatMatrix powers;
      RatVec pw = field.one();
      for (int i = 0; i < base.degree(); ++i) {
        powers.push_back(pw);
        pw = field.mul(pw, old_theta);
      }
      auto x = solve_left(powers, e_vec);
      if (!x) throw std::logic_error("adjoin: change of basis failed");
      return {base, base.theta_vector(), *x};
    }
    return {field, old_theta, e_vec};
  }
  throw std::runtime_error("primitive element search failed within degree cap " + std::to_string(degree_cap));
}

/// Coordinates of `e` in `field`, if it lies there.
inline std::optional<RatVec> locate(const FieldContext& field, const AlgebraicReal& e, int degree_cap = 64) {
  Adjoined a = adjoin(field, e, std::max(degree_cap, field.degree() * e.degree()));
  if (!(a.field == field)) return std::nullopt;
  return a.element;
}

struct CommonField {
  FieldContext field;
  std::vector<RatVec> coords;
};

/// A single real number field containing every input, with coordinates.
inline CommonField common_field(const std::vector<AlgebraicReal>& elems, int degree_cap = 64) {
  if (elems.empty()) throw std::invalid_argument("common_field: empty input");
  CommonField out;
  for (const auto& e : elems) {
    Adjoined a = adjoin(out.field, e, degree_cap);
    if (!(a.field == out.field)) {
      for (auto& v : out.coords) v = a.field.horner(v, a.old_theta);
      out.field = a.field;
    }
    out.coords.push_back(std::move(a.element));
  }
  return out;
}

}  // namespace qhm
