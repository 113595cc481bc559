#pragma once

// Finitely generated subgroups of a real number field, stored as Z-spans of
// rational coordinate vectors with a canonical Hermite normal form.

#include <qhm/field.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace qhm {

using IntVec = std::vector<Integer>;
using IntMatrix = std::vector<IntVec>;

/// Row-style Hermite normal form: zero rows dropped, positive pivots, entries
/// above each pivot reduced into [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix a) {
  if (a.empty()) return a;
  const std::size_t cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      ExtendedGcd e = xgcd(a[r][c], a[i][c]);
      Integer x = a[r][c] / e.g, y = a[i][c] / e.g;
      for (std::size_t j = c; j < cols; ++j) {
        Integer top = e.s * a[r][j] + e.t * a[i][j];
        Integer bottom = x * a[i][j] - y * a[r][j];
        a[r][j] = std::move(top);
        a[i][j] = std::move(bottom);
      }
    }
    if (a[r][c] < 0)
      for (std::size_t j = c; j < cols; ++j) a[r][j] = -a[r][j];
    for (std::size_t k = 0; k < r; ++k) {
      Integer f = floor_div(a[k][c], a[r][c]);
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j) a[k][j] -= f * a[r][j];
    }
    ++r;
  }
  a.resize(r);
  return a;
}

inline std::size_t pivot_column(const IntVec& row) {
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != 0) return j;
  return row.size();
}

class RatLattice {
 public:
  RatLattice(FieldContext context, std::vector<RatVec> gens) : context_(std::move(context)), gens_(std::move(gens)) {
    denom_ = 1;
    for (auto& g : gens_) {
      if (g.size() != context_.size()) throw std::invalid_argument("lattice generator has wrong length");
      for (auto& x : g) {
        x.canonicalize();
        denom_ = lcm(denom_, x.get_den());
      }
    }
    IntMatrix rows;
    for (const auto& g : gens_) {
      IntVec row;
      for (const auto& x : g) row.push_back(Rational(x * denom_).get_num());
      rows.push_back(std::move(row));
    }
    hnf_ = hermite_normal_form(std::move(rows));
    Integer g = denom_;
    for (const auto& row : hnf_)
      for (const auto& x : row) g = gcd(g, x);
    if (g > 1) {
      denom_ /= g;
      for (auto& row : hnf_)
        for (auto& x : row) x /= g;
    }
  }

  const FieldContext& context() const { return context_; }
  const std::vector<RatVec>& generators() const { return gens_; }
  const Integer& denom() const { return denom_; }
  const IntMatrix& hnf() const { return hnf_; }
  int rank() const { return static_cast<int>(hnf_.size()); }

  /// Rational basis vectors: HNF rows divided by the common denominator.
  std::vector<RatVec> basis() const {
    std::vector<RatVec> out;
    for (const auto& row : hnf_) {
      RatVec v;
      for (const auto& x : row) {
        Rational q(x, denom_);
        q.canonicalize();
        v.push_back(q);
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  bool contains(const RatVec& v) const {
    if (v.size() != context_.size()) throw std::invalid_argument("vector has wrong length");
    IntVec w;
    for (const auto& x : v) {
      Rational s = x * denom_;
      if (s.get_den() != 1) return false;
      w.push_back(s.get_num());
    }
    for (const auto& row : hnf_) {
      std::size_t p = pivot_column(row);
      for (std::size_t j = 0; j < p; ++j)
        if (w[j] != 0) return false;
      if (w[p] % row[p] != 0) return false;
      Integer f = w[p] / row[p];
      for (std::size_t j = p; j < w.size(); ++j) w[j] -= f * row[j];
    }
    for (const auto& x : w)
      if (x != 0) return false;
    return true;
  }

 private:
  FieldContext context_;
  std::vector<RatVec> gens_;
  Integer denom_;
  IntMatrix hnf_;
};

inline void require_same_context(const RatLattice& a, const RatLattice& b) {
  if (!(a.context() == b.context())) throw std::invalid_argument("lattices live in different number fields");
}

inline bool lattice_equal(const RatLattice& a, const RatLattice& b) {
  require_same_context(a, b);
  return a.denom() == b.denom() && a.hnf() == b.hnf();
}

inline int rank(const RatLattice& l) { return l.rank(); }

/// r·L for r given by coordinates in L's field.
inline RatLattice scale(const RatLattice& l, const RatVec& r) {
  if (is_zero(r)) throw std::domain_error("scaling a lattice by zero");
  RatMatrix m = l.context().mult_matrix(r);
  std::vector<RatVec> gens;
  for (const auto& b : l.basis()) gens.push_back(vec_mat(b, m));
  return RatLattice(l.context(), std::move(gens));
}

inline RatLattice scale(const RatLattice& l, const AlgebraicReal& r) {
  auto coords = locate(l.context(), r);
  if (!coords) throw std::invalid_argument("scaling factor " + r.to_string() + " is not in the lattice's field");
  return scale(l, *coords);
}

/// [sup : sub] for a sublattice of equal rank.
inline Integer index(const RatLattice& sub, const RatLattice& sup) {
  require_same_context(sub, sup);
  if (sub.rank() != sup.rank()) throw std::invalid_argument("index: rank mismatch");
  for (const auto& v : sub.basis())
    if (!sup.contains(v)) throw std::invalid_argument("index: not a sublattice");
  std::vector<std::size_t> cols;
  for (const auto& row : sup.hnf()) cols.push_back(pivot_column(row));
  auto block = [&](const RatLattice& l) {
    RatMatrix m;
    for (const auto& b : l.basis()) {
      RatVec row;
      for (auto c : cols) row.push_back(b[c]);
      m.push_back(std::move(row));
    }
    return determinant(std::move(m));
  };
  Rational ratio = block(sub) / block(sup);
  if (ratio < 0) ratio = -ratio;
  if (ratio.get_den() != 1) throw std::logic_error("index: non-integral determinant ratio");
  return ratio.get_num();
}

/// G = Z + 2μZ + 2νZ with its designated generators.
struct TraceGroup {
  AlgebraicReal mu, nu;
  RatVec mu_coords, nu_coords;
  RatLattice lattice;

  int rank() const { return lattice.rank(); }
  const FieldContext& context() const { return lattice.context(); }
  /// Designated generators (1, 2μ, 2ν).
  std::vector<RatVec> generators() const { return lattice.generators(); }
};

inline TraceGroup trace_group(const FieldContext& field, const AlgebraicReal& mu, const RatVec& mu_coords,
                              const AlgebraicReal& nu, const RatVec& nu_coords) {
  std::vector<RatVec> gens{field.one(), field.scale(mu_coords, Rational(2)), field.scale(nu_coords, Rational(2))};
  return TraceGroup{mu, nu, mu_coords, nu_coords, RatLattice(field, std::move(gens))};
}

inline TraceGroup trace_group(const AlgebraicReal& mu, const AlgebraicReal& nu, int degree_cap = 64) {
  CommonField cf = common_field({mu, nu}, degree_cap);
  return trace_group(cf.field, mu, cf.coords[0], nu, cf.coords[1]);
}

/// Normalized basis of a rank-2 trace group: G = αZ + (1/q)Z, 0 < α < 1/q.
struct Rank2Basis {
  AlgebraicReal alpha;
  RatVec alpha_coords;
  Integer q;
};

inline Rank2Basis basis_rank2(const RatLattice& g) {
  if (g.rank() != 2) throw std::invalid_argument("basis_rank2: rank is " + std::to_string(g.rank()) + ", not 2");
  const FieldContext& k = g.context();
  const std::size_t d = k.size();
  // Rational coordinate moved last, so the second HNF row spans G ∩ Q.
  IntMatrix rows;
  for (const auto& r : g.hnf()) {
    IntVec row(r.begin() + 1, r.end());
    row.push_back(r[0]);
    rows.push_back(std::move(row));
  }
  const Integer& den = g.denom();
  IntMatrix h = hermite_normal_form(std::move(rows));
  if (h.size() != 2 || pivot_column(h[1]) != d - 1)
    throw std::invalid_argument("basis_rank2: group has no rational generator");
  Rational inv_q(h[1][d - 1], den);
  inv_q.canonicalize();
  if (inv_q.get_num() != 1) throw std::invalid_argument("basis_rank2: group does not contain 1");
  Integer q = inv_q.get_den();
  RatVec raw;
  for (const auto& x : h[0]) {
    Rational v(x, den);
    v.canonicalize();
    raw.push_back(v);
  }
  RatVec alpha_raw{raw.back()};
  alpha_raw.insert(alpha_raw.end(), raw.begin(), raw.end() - 1);
  // Sign fixed by the first irrational generator, which must be a positive multiple of α modulo Q.
  for (const auto& gen : g.generators()) {
    std::size_t i = 1;
    while (i < d && gen[i] == 0) ++i;
    if (i == d) continue;
    if (gen[i] / alpha_raw[i] < 0) alpha_raw = k.neg(alpha_raw);
    break;
  }
  AlgebraicReal qa = k.to_real(k.scale(alpha_raw, Rational(q)));
  Integer shift = qa.floor();
  RatVec alpha = k.sub(alpha_raw, k.from_rational(ratio(shift, q)));
  return Rank2Basis{k.to_real(alpha), alpha, q};
}

inline Rank2Basis basis_rank2(const TraceGroup& g) { return basis_rank2(g.lattice); }

}  // namespace qhm
