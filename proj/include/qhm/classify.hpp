#pragma once

// Morita classification of quantum Heisenberg manifolds D^c_{μν}: c must
// agree and the trace groups G = Z + 2μZ + 2νZ must agree up to a positive
// scaling. Verdicts carry witnesses, certificates and a rewrite trace.

#include <qhm/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qhm {

struct QHMParams {
  Integer c;
  AlgebraicReal mu, nu;

  QHMParams(Integer c_, AlgebraicReal mu_, AlgebraicReal nu_) : c(std::move(c_)), mu(std::move(mu_)), nu(std::move(nu_)) {
    if (c < 1) throw std::invalid_argument("c must be a positive integer");
  }

  Json to_json() const { return Json{{"c", qhm::to_json(c)}, {"mu", qhm::to_json(mu)}, {"nu", qhm::to_json(nu)}}; }

  static QHMParams from_json(const Json& j) {
    return QHMParams(integer_from_json(j.at("c")), algebraic_from_json(j.at("mu")), algebraic_from_json(j.at("nu")));
  }
};

struct Budget {
  int cf_terms = 64;
  int orbit_bound = 8;
  int height_bound = 50;
  int degree_cap = 64;
};

struct TraceStep {
  std::string rule;
  Json data;
};

using Trace = std::vector<TraceStep>;

inline Json to_json(const Trace& t) {
  Json out = Json::array();
  for (const auto& s : t) out.push_back(Json{{"rule", s.rule}, {"data", s.data}});
  return out;
}

struct Equivalent {
  AlgebraicReal r;
  RatVec r_coords;
  std::optional<GL3> gl3;
  std::optional<GL2> gl2;  // rank 2: qα = gl2 · (q'α')
};

enum class CertificateKind { CMismatch, RankMismatch, NoScaling, CFInequivalent };

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::CMismatch:
      return "CMismatch";
    case CertificateKind::RankMismatch:
      return "RankMismatch";
    case CertificateKind::NoScaling:
      return "NoScaling";
    case CertificateKind::CFInequivalent:
      return "CFInequivalent";
  }
  return "?";
}

struct Certificate {
  CertificateKind kind;
  std::string invariant;
  Json values;
};

struct NotEquivalent {
  Certificate certificate;
};

struct Unknown {
  std::string budget_report;
};

struct Verdict {
  std::variant<Equivalent, NotEquivalent, Unknown> outcome = Unknown{};
  Trace trace;
  std::optional<FieldContext> field;

  const Equivalent* equivalent() const { return std::get_if<Equivalent>(&outcome); }
  const NotEquivalent* not_equivalent() const { return std::get_if<NotEquivalent>(&outcome); }
  const Unknown* unknown() const { return std::get_if<Unknown>(&outcome); }

  std::string kind() const {
    if (equivalent()) return "Equivalent";
    if (not_equivalent()) return "NotEquivalent";
    return "Unknown";
  }
};

/// Both trace groups inside one number field.
struct PairEmbedding {
  FieldContext field;
  TraceGroup g, g2;
};

inline PairEmbedding embed_pair(const QHMParams& p, const QHMParams& p2, int degree_cap = 64) {
  CommonField cf = common_field({p.mu, p.nu, p2.mu, p2.nu}, degree_cap);
  return PairEmbedding{cf.field, trace_group(cf.field, p.mu, cf.coords[0], p.nu, cf.coords[1]),
                       trace_group(cf.field, p2.mu, cf.coords[2], p2.nu, cf.coords[3])};
}

// ---------------------------------------------------------------------------
// Scaled equality G = r G'

struct ScaledSearch {
  enum class Kind { Found, None, Unknown };
  Kind kind = Kind::Unknown;
  RatVec r;              // coordinates of r > 0 when found
  std::size_t dim = 0;   // dimension of the rational solution space S
  std::string report;
};

namespace detail {

/// Coordinates of vectors of span_Q(L) in L's HNF basis.
class BasisCoords {
 public:
  explicit BasisCoords(const RatLattice& l) : basis_(l.basis()) {
    for (const auto& row : l.hnf()) pivots_.push_back(pivot_column(row));
    RatMatrix p;
    for (const auto& b : basis_) {
      RatVec row;
      for (auto c : pivots_) row.push_back(b[c]);
      p.push_back(std::move(row));
    }
    auto inv = qhm::inverse(p);
    if (!inv) throw std::logic_error("HNF pivot block is singular");
    pinv_ = std::move(*inv);
  }

  RatVec coords(const RatVec& v) const {
    RatVec vp;
    for (auto c : pivots_) vp.push_back(v[c]);
    return vec_mat(vp, pinv_);
  }

 private:
  std::vector<RatVec> basis_;
  std::vector<std::size_t> pivots_;
  RatMatrix pinv_;
};

/// Rows: coordinates of r·b'_j in the basis of G.
inline RatMatrix transition(const FieldContext& k, const BasisCoords& target, const std::vector<RatVec>& source,
                            const RatVec& r) {
  RatMatrix t;
  for (const auto& b : source) t.push_back(target.coords(k.mul(r, b)));
  return t;
}

inline bool is_integral(const RatMatrix& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (x.get_den() != 1) return false;
  return true;
}

/// Integer linear form that must vanish (modulus 0) or vanish modulo `modulus`.
struct Form {
  std::vector<Integer> coeffs;
  Integer modulus;
};

inline Form integer_form(const std::vector<Rational>& values, bool exact) {
  Integer l = 1;
  for (const auto& v : values) l = lcm(l, v.get_den());
  Form f;
  for (const auto& v : values) f.coeffs.push_back(Rational(v * l).get_num());
  f.modulus = exact ? Integer(0) : l;
  return f;
}

/// Points of Z^m with max-norm exactly h, in lexicographic order.
inline bool for_each_shell_point(std::size_t m, long h, const std::function<bool(const std::vector<long>&)>& visit) {
  std::vector<long> x(m);
  std::function<bool(std::size_t, bool)> rec = [&](std::size_t pos, bool has_h) -> bool {
    if (pos == m) return has_h ? visit(x) : false;
    for (long v = -h; v <= h; ++v) {
      bool at_h = v == h || v == -h;
      if (pos + 1 == m && !has_h && !at_h) continue;
      x[pos] = v;
      if (rec(pos + 1, has_h || at_h)) return true;
    }
    return false;
  };
  return rec(0, false);
}

}  // namespace detail

inline bool scales_to(const TraceGroup& g, const TraceGroup& g2, const RatVec& r) {
  return lattice_equal(g.lattice, scale(g2.lattice, r));
}

/// Searches r > 0 with G = r·G'. Both groups must share a field and a rank.
inline ScaledSearch scaled_group_equal(const TraceGroup& g, const TraceGroup& g2, const Budget& budget = {}) {
  if (!(g.context() == g2.context())) throw std::invalid_argument("trace groups live in different fields");
  if (g.rank() != g2.rank()) throw std::invalid_argument("trace groups have different ranks");
  const FieldContext& k = g.context();
  const std::size_t d = k.size(), n = static_cast<std::size_t>(g.rank());
  const std::vector<RatVec> basis = g.lattice.basis(), basis2 = g2.lattice.basis();

  // r·span(G') ⊆ span(G): every annihilator λ of span(G) kills r·b'_j.
  RatMatrix lambdas = nullspace(basis, d);
  RatMatrix eqs;
  for (const auto& b : basis2) {
    RatMatrix mb = k.mult_matrix(b);
    for (const auto& lam : lambdas) {
      RatVec row(d, Rational(0));
      for (std::size_t l = 0; l < d; ++l)
        for (std::size_t j = 0; j < d; ++j) row[l] += mb[l][j] * lam[j];
      eqs.push_back(std::move(row));
    }
  }
  RatMatrix space = eqs.empty() ? nullspace(RatMatrix{RatVec(d, Rational(0))}, d) : nullspace(eqs, d);
  ScaledSearch out;
  out.dim = space.size();
  const detail::BasisCoords target(g.lattice);

  auto finish = [&](RatVec r) {
    if (k.to_real(r).sign() < 0) r = k.neg(r);
    if (!scales_to(g, g2, r)) throw std::logic_error("scaled_group_equal: candidate failed the lattice check");
    out.kind = ScaledSearch::Kind::Found;
    out.r = std::move(r);
    return out;
  };

  if (out.dim == 0) {
    out.kind = ScaledSearch::Kind::None;
    out.report = "the rational constraint r*span(G') in span(G) forces r = 0";
    return out;
  }
  if (out.dim == 1) {
    // r = t·s0 and det(t·T1) = t^n det(T1) = ±1.
    const RatVec& s0 = space[0];
    RatMatrix t1 = detail::transition(k, target, basis2, s0);
    Rational det1 = determinant(t1);
    for (int sgn : {1, -1}) {
      auto t = exact_root(Rational(sgn / det1), static_cast<unsigned>(n));
      if (!t) continue;
      RatMatrix tt = t1;
      for (auto& row : tt)
        for (auto& x : row) x *= *t;
      if (detail::is_integral(tt)) {
        out.report = "one-dimensional solution space; t^" + std::to_string(n) + " = " + to_string(Rational(sgn / det1));
        return finish(k.scale(s0, *t));
      }
    }
    out.kind = ScaledSearch::Kind::None;
    out.report = "one-dimensional solution space admits no unimodular rescaling (det T1 = " + to_string(det1) + ")";
    return out;
  }

  // dim S >= 2: r ranges over G; enumerate coefficients on (1, 2μ, 2ν) by max-norm.
  const std::vector<RatVec> gens = g.generators();
  const std::size_t m = gens.size();
  std::vector<detail::Form> forms;
  for (const auto& e : eqs) {
    std::vector<Rational> vals;
    for (const auto& gi : gens) {
      Rational s = 0;
      for (std::size_t j = 0; j < d; ++j) s += e[j] * gi[j];
      vals.push_back(s);
    }
    forms.push_back(detail::integer_form(vals, true));
  }
  std::vector<RatMatrix> tgen;
  for (const auto& gi : gens) tgen.push_back(detail::transition(k, target, basis2, gi));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<Rational> vals;
      for (const auto& t : tgen) vals.push_back(t[a][b]);
      detail::Form f = detail::integer_form(vals, false);
      if (f.modulus != 1) forms.push_back(std::move(f));
    }
  const long height = budget.height_bound;
  // Machine-word fast path when |coeff|·m·height stays far below 2^62.
  bool small = true;
  for (const auto& f : forms) {
    for (const auto& c : f.coeffs)
      if (abs_value(c) > Integer(1) << 40) small = false;
    if (abs_value(f.modulus) > Integer(1) << 40) small = false;
  }
  std::vector<std::vector<std::int64_t>> fc;
  std::vector<std::int64_t> fm;
  if (small) {
    for (const auto& f : forms) {
      std::vector<std::int64_t> row;
      for (const auto& c : f.coeffs) row.push_back(c.get_si());
      fc.push_back(std::move(row));
      fm.push_back(f.modulus.get_si());
    }
  }
  auto passes = [&](const std::vector<long>& x) {
    for (std::size_t i = 0; i < forms.size(); ++i) {
      if (small) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < m; ++j) s += fc[i][j] * x[j];
        if (fm[i] == 0 ? s != 0 : s % fm[i] != 0) return false;
      } else {
        Integer s = 0;
        for (std::size_t j = 0; j < m; ++j) s += forms[i].coeffs[j] * x[j];
        if (forms[i].modulus == 0 ? s != 0 : s % forms[i].modulus != 0) return false;
      }
    }
    return true;
  };
  std::optional<RatVec> hit;
  for (long h = 1; h <= height && !hit; ++h) {
    detail::for_each_shell_point(m, h, [&](const std::vector<long>& x) {
      if (!passes(x)) return false;
      RatVec r = k.zero();
      for (std::size_t j = 0; j < m; ++j) r = k.add(r, k.scale(gens[j], Rational(x[j])));
      if (is_zero(r)) return false;
      RatMatrix t = detail::transition(k, target, basis2, r);
      if (!detail::is_integral(t)) return false;
      Rational det = determinant(t);
      if (det != 1 && det != -1) return false;
      hit = r;
      return true;
    });
  }
  if (hit) {
    out.report = "enumeration hit in a " + std::to_string(out.dim) + "-dimensional solution space";
    return finish(*hit);
  }
  out.kind = ScaledSearch::Kind::Unknown;
  out.report = "solution space has dimension " + std::to_string(out.dim) +
               "; no r = x + 2mu*y + 2nu*z with |x|,|y|,|z| <= " + std::to_string(height) + " works";
  return out;
}

namespace detail {
/// Whether (p, p2) is already in the canonical order used for asymmetric searches.
inline bool canonical_order(const QHMParams& p, const QHMParams& p2) {
  auto key = [](const QHMParams& x) { return x.mu.to_string() + "|" + x.nu.to_string(); };
  return key(p) <= key(p2);
}
}  // namespace detail

/// Orientation-independent search: the pair is searched in a canonical order
/// and the hit inverted when needed, so swapping the arguments inverts r.
inline ScaledSearch oriented_scaled_search(const QHMParams& p, const QHMParams& p2, const PairEmbedding& e,
                                           const Budget& budget = {}) {
  if (detail::canonical_order(p, p2)) return scaled_group_equal(e.g, e.g2, budget);
  ScaledSearch s = scaled_group_equal(e.g2, e.g, budget);
  if (s.kind == ScaledSearch::Kind::Found) {
    s.r = e.field.inverse(s.r);
    if (!scales_to(e.g, e.g2, s.r)) throw std::logic_error("oriented_scaled_search: inverted witness failed");
  }
  return s;
}

/// A in GL3(Z) with rows the coordinates of (2rμ', 2rν', r) in (2μ, 2ν, 1).
inline GL3 gl3_witness(const TraceGroup& g, const TraceGroup& g2, const RatVec& r) {
  const FieldContext& k = g.context();
  const std::vector<RatVec> gens = g.generators(), gens2 = g2.generators();
  RatMatrix source{gens[1], gens[2], gens[0]};
  std::vector<std::vector<Integer>> rows;
  for (const RatVec& target : {k.mul(r, gens2[1]), k.mul(r, gens2[2]), r}) {
    auto x = solve_left(source, target);
    if (!x) throw std::logic_error("gl3_witness: target outside span(2mu, 2nu, 1)");
    std::vector<Integer> row;
    for (const auto& v : *x) {
      if (v.get_den() != 1) throw std::logic_error("gl3_witness: transition matrix is not integral");
      row.push_back(v.get_num());
    }
    rows.push_back(std::move(row));
  }
  auto a = GL3::from_rows(rows);
  if (!a) throw std::logic_error("gl3_witness: transition matrix is not unimodular");
  auto [mu2, nu2] = gl3_act_coords(*a, k, g.mu_coords, g.nu_coords);
  if (mu2 != g2.mu_coords || nu2 != g2.nu_coords) throw std::logic_error("gl3_witness: verification by gl3_act failed");
  return *a;
}

// ---------------------------------------------------------------------------
// Orbit moves and the rank-2 / dif reductions

struct OrbitMatch {
  GL2 matrix;                 // A (2μ, 2ν) + shift = (2μ', 2ν')
  Integer shift_mu, shift_nu;
};

inline std::optional<OrbitMatch> orbit_isomorphic(const PairEmbedding& e, const Budget& budget = {}) {
  const FieldContext& k = e.field;
  const RatVec m0 = k.scale(e.g.mu_coords, 2), n0 = k.scale(e.g.nu_coords, 2);
  const RatVec m1 = k.scale(e.g2.mu_coords, 2), n1 = k.scale(e.g2.nu_coords, 2);
  auto integral_offset = [&](long a, long b, const RatVec& target) -> std::optional<Integer> {
    RatVec diff = k.sub(target, k.add(k.scale(m0, Rational(a)), k.scale(n0, Rational(b))));
    for (std::size_t i = 1; i < diff.size(); ++i)
      if (diff[i] != 0) return std::nullopt;
    if (diff[0].get_den() != 1) return std::nullopt;
    return diff[0].get_num();
  };
  struct Row {
    long a, b;
    Integer shift;
  };
  std::vector<Row> rows1, rows2;
  const long bound = budget.orbit_bound;
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b) {
      if (auto s = integral_offset(a, b, m1)) rows1.push_back({a, b, *s});
      if (auto s = integral_offset(a, b, n1)) rows2.push_back({a, b, *s});
    }
  for (const auto& r1 : rows1)
    for (const auto& r2 : rows2) {
      long det = r1.a * r2.b - r1.b * r2.a;
      if (det == 1 || det == -1) return OrbitMatch{GL2{{r1.a, r1.b}, {r2.a, r2.b}}, r1.shift, r2.shift};
    }
  return std::nullopt;
}

inline std::optional<OrbitMatch> orbit_isomorphic(const QHMParams& p, const QHMParams& p2, const Budget& budget = {}) {
  if (p.c != p2.c) throw std::invalid_argument("orbit_isomorphic requires equal c");
  return orbit_isomorphic(embed_pair(p, p2, budget.degree_cap), budget);
}

struct Normalized {
  QHMParams params;
  GL2 matrix;  // overall action on (2μ, 2ν)
  bool swapped = false;
  Trace trace;
};

namespace detail {
inline bool is_rational_vec(const RatVec& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}
}  // namespace detail

/// Moves a rank-2 parameter pair to the shape (p/(2q), ν').
inline Normalized normalize_rank2(const QHMParams& p, int degree_cap = 64) {
  CommonField cf = common_field({p.mu, p.nu}, degree_cap);
  const FieldContext& k = cf.field;
  TraceGroup g = trace_group(k, p.mu, cf.coords[0], p.nu, cf.coords[1]);
  if (g.rank() != 2) throw std::invalid_argument("normalize_rank2: rank is " + std::to_string(g.rank()) + ", not 2");
  RatVec mu0 = k.scale(cf.coords[0], 2), nu0 = k.scale(cf.coords[1], 2);
  Normalized out{p, GL2(), false, {}};
  if (detail::is_rational_vec(mu0)) {
    out.trace.push_back({"rank12-normalize", Json{{"k", 0}, {"note", "rational slot already in place"}}});
    return out;
  }
  if (detail::is_rational_vec(nu0)) {
    std::swap(mu0, nu0);
    out.swapped = true;
    out.matrix = GL2{{0, 1}, {1, 0}};
    out.params = QHMParams(p.c, p.nu, p.mu);
    out.trace.push_back({"sorb-orbit", Json{{"move", "swap mu and nu"}, {"matrix", to_json(out.matrix)}}});
    return out;
  }
  // μ0 = (k/l) ν0 + m/n.
  std::size_t i = 1;
  while (nu0[i] == 0) ++i;
  Rational s = mu0[i] / nu0[i];
  RatVec rem = k.sub(mu0, k.scale(nu0, s));
  if (!detail::is_rational_vec(rem)) throw std::logic_error("normalize_rank2: 1, 2mu, 2nu span more than two dimensions");
  const Integer kk = s.get_num(), ll = s.get_den();
  const Rational t = rem[0];
  ExtendedGcd e = xgcd(kk, ll);
  GL2::Rows mrows{{{Integer(-ll), kk}, {e.s, e.t}}};
  GL2 m(mrows);
  RatVec mu1 = k.add(k.scale(mu0, Rational(-ll)), k.scale(nu0, Rational(kk)));
  RatVec nu1 = k.add(k.scale(mu0, Rational(e.s)), k.scale(nu0, Rational(e.t)));
  out.matrix = m;
  out.params = QHMParams(p.c, k.to_real(k.scale(mu1, Rational(1, 2))), k.to_real(k.scale(nu1, Rational(1, 2))));
  out.trace.push_back({"rank12-normalize",
                       Json{{"k", to_json(kk)},
                            {"l", to_json(ll)},
                            {"m/n", to_json(t)},
                            {"a", to_json(e.s)},
                            {"b", to_json(e.t)},
                            {"matrix", to_json(m)},
                            {"two_mu_after", to_json(mu1[0])},
                            {"nu_after", to_json(out.params.nu)}}});
  return out;
}

struct DifResult {
  QHMParams params;
  std::vector<Integer> remainders;  // r_0 = q, r_1 = p, ..., 1
  std::size_t chain_length = 0;     // number of fmu flips
  Trace trace;
};

/// D^c_{p/2q, ν} to D^c_{0, qν} by alternating fmu flips and translations.
inline DifResult reduce_dif(const QHMParams& p) {
  if (!p.mu.is_rational()) throw std::invalid_argument("reduce_dif: mu is not of the form p/(2q)");
  Rational two_mu = p.mu.rational_value() * 2;
  const Integer q = two_mu.get_den();
  DifResult out{p, {}, 0, {}};
  Integer shift = floor(two_mu);
  Integer pp = two_mu.get_num() - shift * q;
  if (shift != 0) out.trace.push_back({"sorb-orbit", Json{{"translate_two_mu", to_json(Integer(-shift))}}});
  std::vector<Integer>& r = out.remainders;
  r = {q};
  if (pp != 0) r.push_back(pp);
  while (r.back() != 1) r.push_back(r[r.size() - 2] % r.back());
  Json rem = Json::array();
  for (const auto& x : r) rem.push_back(to_json(x));
  out.trace.push_back({"dif-chain", Json{{"remainders", rem}}});
  Rational nu_scale = 1;
  for (std::size_t i = 1; i < r.size(); ++i) {
    // (r_i / 2r_{i-1}, κ) -> (r_{i-1} / 2r_i, κ r_{i-1} / r_i), then drop the integer part of 2μ.
    Rational before = ratio(r[i], r[i - 1]);
    Rational after = ratio(r[i - 1], r[i]);
    nu_scale *= after;
    Integer m = floor_div(r[i - 1], r[i]);
    out.trace.push_back({"fmu-flip", Json{{"two_mu_before", to_json(before)},
                                          {"two_mu_after", to_json(after)},
                                          {"nu_scale", to_json(nu_scale)}}});
    out.trace.push_back({"sorb-orbit", Json{{"translate_two_mu", to_json(Integer(-m))}}});
    ++out.chain_length;
  }
  if (nu_scale != Rational(q)) throw std::logic_error("reduce_dif: scale does not telescope to q");
  out.params = QHMParams(p.c, AlgebraicReal(0), AlgebraicReal(q) * p.nu);
  return out;
}

// ---------------------------------------------------------------------------
// The decision procedure

namespace detail {

inline Verdict not_equivalent(Verdict v, CertificateKind kind, std::string invariant, Json values) {
  v.outcome = NotEquivalent{Certificate{kind, std::move(invariant), std::move(values)}};
  return v;
}

/// Trace of the rank-1 collapse of one side to (0, 0).
inline Trace rank1_collapse(const QHMParams& p, const FieldContext& k, const RatVec& mu, const RatVec& nu) {
  Trace t;
  Rational m0 = k.scale(mu, 2)[0], n0 = k.scale(nu, 2)[0];
  Integer den = lcm(m0.get_den(), n0.get_den());
  Integer a = Rational(m0 * den).get_num(), b = Rational(n0 * den).get_num();
  Rational rational_mu = m0 / 2;
  if (b != 0) {
    ExtendedGcd e = xgcd(a, b);
    GL2::Rows u{{{e.s, e.t}, {Integer(-b / e.g), Integer(a / e.g)}}};
    t.push_back({"sorb-orbit", Json{{"matrix", to_json(GL2(u))},
                                    {"two_mu_after", to_json(ratio(e.g, den))},
                                    {"two_nu_after", 0}}});
    rational_mu = ratio(e.g, den) / 2;
  }
  DifResult dif = reduce_dif(QHMParams(p.c, AlgebraicReal(rational_mu), AlgebraicReal(0)));
  t.insert(t.end(), dif.trace.begin(), dif.trace.end());
  return t;
}

}  // namespace detail

inline Verdict decide_equivalence(const QHMParams& p, const QHMParams& p2, const Budget& budget = {}) {
  Verdict v;
  if (p.c != p2.c) {
    v.trace.push_back({"k0-torsion", Json{{"c", to_json(p.c)}, {"c2", to_json(p2.c)}}});
    return detail::not_equivalent(std::move(v), CertificateKind::CMismatch, "torsion Z_c of K_0",
                                  Json{{"c", to_json(p.c)}, {"c2", to_json(p2.c)}});
  }
  std::optional<PairEmbedding> emb;
  try {
    emb = embed_pair(p, p2, budget.degree_cap);
  } catch (const std::runtime_error& e) {
    v.outcome = Unknown{std::string("common field: ") + e.what()};
    return v;
  }
  const PairEmbedding& e = *emb;
  const FieldContext& k = e.field;
  v.field = k;
  const int rank = e.g.rank(), rank2 = e.g2.rank();
  v.trace.push_back({"trace-rank", Json{{"rank", rank},
                                        {"rank2", rank2},
                                        {"G", to_json(e.g.lattice)},
                                        {"G2", to_json(e.g2.lattice)},
                                        {"field_degree", k.degree()}}});
  if (rank != rank2)
    return detail::not_equivalent(std::move(v), CertificateKind::RankMismatch, "rank of the trace group",
                                  Json{{"rank", rank}, {"rank2", rank2}});
  if (auto orbit = orbit_isomorphic(e, budget))
    v.trace.push_back({"sorb-orbit", Json{{"matrix", to_json(orbit->matrix)},
                                          {"shift", Json::array({to_json(orbit->shift_mu), to_json(orbit->shift_nu)})},
                                          {"note", "same GL2(Z) orbit on the torus: isomorphic"}}});

  auto equivalent = [&](RatVec r, std::optional<GL3> gl3, std::optional<GL2> gl2) {
    if (!scales_to(e.g, e.g2, r)) throw std::logic_error("decide_equivalence: witness r failed the lattice check");
    AlgebraicReal rv = k.to_real(r);
    if (rv.sign() <= 0) throw std::logic_error("decide_equivalence: witness r is not positive");
    v.outcome = Equivalent{rv, std::move(r), std::move(gl3), std::move(gl2)};
    return v;
  };

  if (rank == 1) {
    Rational gen = e.g.lattice.basis()[0][0], gen2 = e.g2.lattice.basis()[0][0];
    if (gen < 0) gen = -gen;
    if (gen2 < 0) gen2 = -gen2;
    Json sides = Json::array();
    for (int side = 0; side < 2; ++side) {
      const TraceGroup& g = side == 0 ? e.g : e.g2;
      Json steps = to_json(detail::rank1_collapse(side == 0 ? p : p2, k, g.mu_coords, g.nu_coords));
      sides.push_back(Json{{"side", side + 1}, {"steps", steps}});
    }
    v.trace.push_back({"rank1-collapse", Json{{"to", "(0, 0)"}, {"sides", sides}}});
    return equivalent(k.from_rational(Rational(gen / gen2)), std::nullopt, std::nullopt);
  }

  if (rank == 2) {
    Rank2Basis b = basis_rank2(e.g), b2 = basis_rank2(e.g2);
    RatVec x = k.scale(b.alpha_coords, Rational(b.q)), x2 = k.scale(b2.alpha_coords, Rational(b2.q));
    AlgebraicReal xr = k.to_real(x), x2r = k.to_real(x2);
    v.trace.push_back({"rank2-basis", Json{{"alpha", to_json(b.alpha)},
                                           {"q", to_json(b.q)},
                                           {"alpha2", to_json(b2.alpha)},
                                           {"q2", to_json(b2.q)}}});
    // Searched in canonical order so that swapping the pair inverts the witness.
    const bool forward = detail::canonical_order(p, p2);
    SerretResult sr = forward ? serret_equivalent(xr, x2r, budget.cf_terms) : serret_equivalent(x2r, xr, budget.cf_terms);
    ScaledSearch lattice_route;
    auto run_lattice_route = [&] {
      lattice_route = oriented_scaled_search(p, p2, e, budget);
      v.trace.push_back({"lattice-crosscheck", Json{{"dim_S", lattice_route.dim}, {"report", lattice_route.report}}});
    };
    if (sr.kind == SerretKind::Equivalent) {
      // qα = A (q'α') with A = (a b; c d) gives G = r G' with r = q' / (q (c q'α' + d)).
      GL2 a = forward ? sr.witness->inverse() : *sr.witness;
      RatVec r = k.div(k.from_rational(ratio(b2.q, b.q)), k.add(k.scale(x2, Rational(a(1, 0))), k.from_rational(Rational(a(1, 1)))));
      if (k.to_real(r).sign() < 0) r = k.neg(r);
      // The displayed variant q'α' = (a qα' + b)/(c qα' + d), evaluated with the same matrix.
      bool displayed_holds = false;
      RatVec y = k.scale(b2.alpha_coords, Rational(b.q));
      RatVec den = k.add(k.scale(y, Rational(a(1, 0))), k.from_rational(Rational(a(1, 1))));
      if (!is_zero(den)) {
        RatVec num = k.add(k.scale(y, Rational(a(0, 0))), k.from_rational(Rational(a(0, 1))));
        displayed_holds = k.div(num, den) == x2;
      }
      v.trace.push_back({"gl2-serret", Json{{"x", to_json(xr)},
                                            {"x2", to_json(x2r)},
                                            {"cf_x", to_json(cf_expand(xr, budget.cf_terms))},
                                            {"cf_x2", to_json(cf_expand(x2r, budget.cf_terms))},
                                            {"reason", sr.reason},
                                            {"reading_a", Json{{"statement", "q*alpha = (a*q'*alpha' + b)/(c*q'*alpha' + d)"},
                                                               {"matrix", to_json(a)},
                                                               {"holds", true}}},
                                            {"reading_b", Json{{"statement", "q'*alpha' = (a*q*alpha' + b)/(c*q*alpha' + d)"},
                                                               {"matrix", to_json(a)},
                                                               {"holds", displayed_holds},
                                                               {"suspected_typo", true}}}}});
      if (!scales_to(e.g, e.g2, r)) {
        v.outcome = Unknown{"diagnostic: continued fractions give an equivalence but G != r G' for r = " +
                            k.to_real(r).to_string()};
        return v;
      }
      v.trace.push_back({"lattice-crosscheck", Json{{"r", to_json(k.to_real(r))}, {"G_equals_rG2", true}}});
      return equivalent(r, std::nullopt, a);
    }
    run_lattice_route();
    if (sr.kind == SerretKind::NotEquivalent) {
      v.trace.push_back({"gl2-serret", Json{{"x", to_json(xr)},
                                            {"x2", to_json(x2r)},
                                            {"cf_x", to_json(cf_expand(xr, budget.cf_terms))},
                                            {"cf_x2", to_json(cf_expand(x2r, budget.cf_terms))},
                                            {"reason", sr.reason}}});
      if (lattice_route.kind == ScaledSearch::Kind::Found) {
        v.outcome = Unknown{"diagnostic: continued fractions say inequivalent but G = r G' for r = " +
                            k.to_real(lattice_route.r).to_string()};
        return v;
      }
      return detail::not_equivalent(std::move(v), CertificateKind::CFInequivalent, "GL2(Z) class of q*alpha",
                                    Json{{"x", to_json(xr)}, {"x2", to_json(x2r)}, {"reason", sr.reason}});
    }
    v.trace.push_back({"gl2-serret", Json{{"x", to_json(xr)}, {"x2", to_json(x2r)}, {"reason", sr.reason}}});
    if (lattice_route.kind == ScaledSearch::Kind::Found) return equivalent(lattice_route.r, std::nullopt, std::nullopt);
    if (lattice_route.kind == ScaledSearch::Kind::None)
      return detail::not_equivalent(std::move(v), CertificateKind::NoScaling, "no r with G = r G'",
                                    Json{{"dim_S", lattice_route.dim}, {"report", lattice_route.report}});
    v.outcome = Unknown{sr.reason + "; " + lattice_route.report};
    return v;
  }

  ScaledSearch s = oriented_scaled_search(p, p2, e, budget);
  v.trace.push_back({"scaled-search", Json{{"dim_S", s.dim}, {"report", s.report}}});
  if (s.kind == ScaledSearch::Kind::Found) {
    GL3 a = gl3_witness(e.g, e.g2, s.r);
    v.trace.push_back({"gl3-witness", Json{{"matrix", to_json(a)}, {"r", to_json(k.to_real(s.r))}}});
    return equivalent(s.r, a, std::nullopt);
  }
  if (s.kind == ScaledSearch::Kind::None)
    return detail::not_equivalent(std::move(v), CertificateKind::NoScaling, "no r with G = r G'",
                                  Json{{"dim_S", s.dim}, {"report", s.report}});
  v.outcome = Unknown{s.report};
  return v;
}

// ---------------------------------------------------------------------------
// Witness files

inline Json to_json(const Verdict& v, const QHMParams& p, const QHMParams& p2) {
  Json out{{"verdict", v.kind()}, {"params", p.to_json()}, {"params2", p2.to_json()}, {"trace", to_json(v.trace)}};
  out["r"] = nullptr;
  out["gl3"] = nullptr;
  out["gl2"] = nullptr;
  out["certificate"] = nullptr;
  out["budget_report"] = nullptr;
  if (v.field) out["field"] = Json{{"theta", to_json(v.field->theta())}, {"degree", v.field->degree()}};
  if (const auto* eq = v.equivalent()) {
    Json r = to_json(eq->r);
    r["coords"] = to_json(eq->r_coords);
    out["r"] = r;
    if (eq->gl3) out["gl3"] = to_json(*eq->gl3);
    if (eq->gl2) out["gl2"] = to_json(*eq->gl2);
  } else if (const auto* ne = v.not_equivalent()) {
    out["certificate"] = Json{{"kind", to_string(ne->certificate.kind)},
                              {"invariant", ne->certificate.invariant},
                              {"values", ne->certificate.values}};
  } else {
    out["budget_report"] = v.unknown()->budget_report;
  }
  return out;
}

struct WitnessCheck {
  bool ok = true;
  std::vector<std::string> messages;

  void fail(std::string m) {
    ok = false;
    messages.push_back(std::move(m));
  }
  void pass(std::string m) { messages.push_back(std::move(m)); }
};

/// Re-verifies a saved verdict from first principles.
inline WitnessCheck check_witness(const Json& w, const Budget& budget = {}) {
  WitnessCheck out;
  const QHMParams p = QHMParams::from_json(w.at("params"));
  const QHMParams p2 = QHMParams::from_json(w.at("params2"));
  const std::string verdict = w.at("verdict").get<std::string>();
  if (verdict == "Equivalent") {
    if (p.c != p2.c) out.fail("c differs but the verdict is Equivalent");
    AlgebraicReal r = algebraic_from_json(w.at("r"));
    if (r.sign() <= 0) out.fail("r is not positive");
    CommonField cf = common_field({p.mu, p.nu, p2.mu, p2.nu, r}, budget.degree_cap);
    TraceGroup g = trace_group(cf.field, p.mu, cf.coords[0], p.nu, cf.coords[1]);
    TraceGroup g2 = trace_group(cf.field, p2.mu, cf.coords[2], p2.nu, cf.coords[3]);
    if (lattice_equal(g.lattice, scale(g2.lattice, cf.coords[4]))) {
      out.pass("G = r G' holds exactly");
    } else {
      out.fail("G != r G'");
    }
    if (w.contains("gl3") && !w.at("gl3").is_null()) {
      GL3 a = unimodular_from_json<3>(w.at("gl3"));
      auto [mu2, nu2] = gl3_act(a, p.mu, p.nu);
      if (mu2 == p2.mu && nu2 == p2.nu) {
        out.pass("gl3_act(A, mu, nu) = (mu', nu')");
      } else {
        out.fail("gl3_act(A, mu, nu) != (mu', nu')");
      }
    }
    if (w.contains("gl2") && !w.at("gl2").is_null()) {
      GL2 a = unimodular_from_json<2>(w.at("gl2"));
      Rank2Basis b = basis_rank2(g), b2 = basis_rank2(g2);
      AlgebraicReal x = AlgebraicReal(b.q) * b.alpha, x2 = AlgebraicReal(b2.q) * b2.alpha;
      if (gl2_act(a, x2) == x) {
        out.pass("q*alpha = A (q'*alpha')");
      } else {
        out.fail("q*alpha != A (q'*alpha')");
      }
    }
  } else if (verdict == "NotEquivalent") {
    const Json& cert = w.at("certificate");
    const std::string kind = cert.at("kind").get<std::string>();
    const Json& values = cert.at("values");
    if (kind == "CMismatch") {
      if (p.c != p2.c && integer_from_json(values.at("c")) == p.c && integer_from_json(values.at("c2")) == p2.c) {
        out.pass("c != c'");
      } else {
        out.fail("CMismatch certificate does not match the parameters");
      }
    } else {
      PairEmbedding e = embed_pair(p, p2, budget.degree_cap);
      if (kind == "RankMismatch") {
        if (e.g.rank() != e.g2.rank() && values.at("rank").get<int>() == e.g.rank() &&
            values.at("rank2").get<int>() == e.g2.rank()) {
          out.pass("ranks differ: " + std::to_string(e.g.rank()) + " vs " + std::to_string(e.g2.rank()));
        } else {
          out.fail("RankMismatch certificate does not match recomputed ranks");
        }
      } else if (kind == "NoScaling") {
        std::optional<ScaledSearch> s;
        if (e.g.rank() == e.g2.rank()) s = oriented_scaled_search(p, p2, e, budget);
        if (s && s->kind == ScaledSearch::Kind::None && values.at("dim_S").get<std::size_t>() == s->dim) {
          out.pass("no scaling: solution space dimension " + std::to_string(s->dim));
        } else {
          out.fail("NoScaling certificate not reproduced");
        }
      } else if (kind == "CFInequivalent") {
        if (e.g.rank() != 2 || e.g2.rank() != 2) {
          out.fail("CFInequivalent certificate on groups that are not both rank 2");
        } else {
          Rank2Basis b = basis_rank2(e.g), b2 = basis_rank2(e.g2);
          SerretResult s = serret_equivalent(AlgebraicReal(b.q) * b.alpha, AlgebraicReal(b2.q) * b2.alpha, budget.cf_terms);
          if (s.kind == SerretKind::NotEquivalent) {
            out.pass("q*alpha and q'*alpha' are GL2(Z)-inequivalent: " + s.reason);
          } else {
            out.fail("CFInequivalent certificate not reproduced");
          }
        }
      } else {
        out.fail("unknown certificate kind " + kind);
      }
    }
  } else {
    out.fail("verdict '" + verdict + "' carries no witness");
  }
  return out;
}

}  // namespace qhm
