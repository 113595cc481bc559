#pragma once

// Double-precision spot checks of the cocycle identities, the membership
// rules of M^c, X^{α,u} and X^{β,u*}, and the intertwiners J_α, J_β, H_α, H_β
// behind the equivalence D^c_{μν} ~ D^c_{1/(4μ), ν/(2μ)}.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qhm::bimodule {

using Complex = std::complex<double>;

/// e(h) = exp(2πih).
inline Complex e(double h) {
  double turns = h - std::floor(h);
  return std::polar(1.0, 2 * std::numbers::pi * turns);
}

inline double mod1(double y) { return y - std::floor(y); }

/// Which U-or-u* rule applies when n·k ≠ 0.
enum class CocycleSign {
  Product,  // u when nk > 0, u* when nk < 0
  Literal,  // u only when n, k > 0, u* as soon as one index is negative
};

struct GeometrySpec {
  double mu, nu;
  int c;
  CocycleSign sign = CocycleSign::Product;

  GeometrySpec(double mu_, double nu_, int c_, CocycleSign sign_ = CocycleSign::Product)
      : mu(mu_), nu(nu_), c(c_), sign(sign_) {
    if (mu == 0) throw std::invalid_argument("the geometry needs mu != 0");
    if (c < 0) throw std::invalid_argument("c must be nonnegative");
  }

  /// α: translation by (1/(2μ), 0).
  double alpha_shift() const { return 1 / (2 * mu); }

  /// u(x, y) = e(−cy).
  Complex u(double, double y) const { return e(-c * mod1(y)); }

  /// The (μ', ν') = (1/(4μ), ν/(2μ)) geometry.
  GeometrySpec flipped() const { return GeometrySpec(1 / (4 * mu), nu / (2 * mu), c, sign); }
};

enum class Membership { Mc, XalphaU, XbetaUstar, CT2, None };

inline std::string to_string(Membership m) {
  switch (m) {
    case Membership::Mc:
      return "Mc";
    case Membership::XalphaU:
      return "Xalpha_u";
    case Membership::XbetaUstar:
      return "Xbeta_ustar";
    case Membership::CT2:
      return "C(T2)";
    case Membership::None:
      return "none";
  }
  return "?";
}

/// A function on R×T (or T² for tag CT2) evaluated pointwise.
struct SampledFunction {
  std::function<Complex(double, double)> evaluator;
  Membership tag = Membership::None;

  Complex operator()(double x, double y) const {
    if (tag == Membership::CT2) return evaluator(mod1(x), mod1(y));
    return evaluator(x, mod1(y));
  }
};

/// A compactly supported real function on [lo, hi].
struct Bump {
  std::function<double(double)> f;
  double lo, hi;

  double operator()(double t) const { return t < lo || t > hi ? 0.0 : f(t); }
};

/// Smooth bump exp(−1/(1 − s²)) rescaled to [lo, hi].
inline Bump smooth_bump(double lo, double hi, double height = 1.0) {
  if (!(hi > lo)) throw std::invalid_argument("bump needs lo < hi");
  return Bump{[=](double t) {
                double s = (2 * t - lo - hi) / (hi - lo);
                if (s <= -1 || s >= 1) return 0.0;
                return height * std::exp(1 - 1 / (1 - s * s));
              },
              lo, hi};
}

/// Piecewise-linear hat on [lo, hi] peaking at the midpoint.
inline Bump hat(double lo, double hi, double height = 1.0) {
  if (!(hi > lo)) throw std::invalid_argument("hat needs lo < hi");
  return Bump{[=](double t) {
                double mid = (lo + hi) / 2, half = (hi - lo) / 2;
                return height * std::max(0.0, 1 - std::abs(t - mid) / half);
              },
              lo, hi};
}

/// f(x, y) = Σ_n bump(x − n) e(−cny), an element of M^c.
inline SampledFunction make_mc_section(const Bump& bump, int c) {
  if (bump.hi - bump.lo >= 3) throw std::invalid_argument("bump support must be shorter than 3");
  return SampledFunction{[bump, c](double x, double y) {
                           Complex s = 0;
                           long first = static_cast<long>(std::ceil(x - bump.hi));
                           long last = static_cast<long>(std::floor(x - bump.lo));
                           for (long n = first; n <= last; ++n) s += bump(x - static_cast<double>(n)) * e(-c * n * y);
                           return s;
                         },
                         Membership::Mc};
}

/// Σ a_{jk} e(js + kt) over |j|, |k| ≤ degree with seeded coefficients.
inline SampledFunction random_trig_polynomial(int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::vector<std::pair<std::pair<int, int>, Complex>> terms;
  for (int j = -degree; j <= degree; ++j)
    for (int k = -degree; k <= degree; ++k) terms.push_back({{j, k}, Complex(coeff(rng), coeff(rng))});
  return SampledFunction{[terms](double s, double t) {
                           Complex v = 0;
                           for (const auto& [jk, a] : terms) v += a * e(jk.first * s + jk.second * t);
                           return v;
                         },
                         Membership::CT2};
}

inline SampledFunction constant_function(Complex value) {
  return SampledFunction{[value](double, double) { return value; }, Membership::CT2};
}

// ---------------------------------------------------------------------------
// The cocycle U(n, k)

/// S_l = {0, …, l−1} for l > 0, {−1, …, l} for l < 0, empty for l = 0.
inline std::vector<int> index_set(int l) {
  std::vector<int> s;
  if (l > 0)
    for (int i = 0; i < l; ++i) s.push_back(i);
  else
    for (int i = -1; i >= l; --i) s.push_back(i);
  return s;
}

/// Whether U(n, k) is built from u* rather than u.
inline bool uses_conjugate(int n, int k, CocycleSign sign) {
  if (sign == CocycleSign::Product) return static_cast<long>(n) * k < 0;
  return n < 0 || k < 0;
}

/// α^i β^j (w)(x, y) = w(x − i/(2μ) − j, y − 2νj) for w = u or u*.
inline Complex translated_u(const GeometrySpec& g, int i, int j, double x, double y, bool conjugate) {
  Complex v = g.u(x - i * g.alpha_shift() - j, y - 2 * g.nu * j);
  return conjugate ? std::conj(v) : v;
}

inline Complex cocycle_value(int n, int k, const GeometrySpec& g, double x, double y) {
  if (n == 0 || k == 0) return 1.0;
  const bool star = uses_conjugate(n, k, g.sign);
  Complex p = 1.0;
  for (int i : index_set(k))
    for (int j : index_set(n)) p *= translated_u(g, i, j, x, y, star);
  return p;
}

inline SampledFunction cocycle_U(int n, int k, const GeometrySpec& g) {
  return SampledFunction{[n, k, g](double x, double y) { return cocycle_value(n, k, g, x, y); }, Membership::None};
}

struct ResidualReport {
  std::string identity_name;
  double max_residual = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const {
    return nlohmann::json{{"identity_name", identity_name}, {"max_residual", max_residual}, {"samples", samples}, {"seed", seed}};
  }
};

inline nlohmann::json to_json(const std::vector<ResidualReport>& reports) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : reports) out.push_back(r.to_json());
  return out;
}

namespace detail {

/// Uniform x ∈ [−10, 10], y ∈ [0, 1).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed), x_(-10.0, 10.0), y_(0.0, 1.0) {}
  std::pair<double, double> next() {
    double x = x_(rng_);
    return {x, y_(rng_)};
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> x_, y_;
};

/// U(n, k) at one point for |n|, |k| ≤ reach, from a table of translated u values.
class CocycleTable {
 public:
  CocycleTable(const GeometrySpec& g, int reach, double x, double y) : g_(g), reach_(reach) {
    const int w = 2 * reach;
    plain_.assign(static_cast<std::size_t>(w * w), 0);
    for (int i = -reach; i < reach; ++i)
      for (int j = -reach; j < reach; ++j) plain_[slot(i, j)] = translated_u(g, i, j, x, y, false);
  }

  Complex operator()(int n, int k) const {
    if (n == 0 || k == 0) return 1.0;
    const bool star = uses_conjugate(n, k, g_.sign);
    const int i0 = std::min(k, 0), i1 = std::max(k, 0), j0 = std::min(n, 0), j1 = std::max(n, 0);
    Complex p = 1.0;
    for (int i = i0; i < i1; ++i)
      for (int j = j0; j < j1; ++j) p *= plain_[slot(i, j)];
    return star ? std::conj(p) : p;
  }

 private:
  std::size_t slot(int i, int j) const { return static_cast<std::size_t>((i + reach_) * 2 * reach_ + (j + reach_)); }

  GeometrySpec g_;
  int reach_;
  std::vector<Complex> plain_;
};

}  // namespace detail

/// Max of |U(m+n,k) − U(m,k)β^m(U(n,k))| and |U(n,k+l) − U(n,k)α^k(U(n,l))| over
/// random points and |m|, |n|, |k|, |l| ≤ bound.
inline std::vector<ResidualReport> check_cocycle_identities(const GeometrySpec& g, std::size_t sample_count,
                                                            std::uint64_t seed = 1, int bound = 3) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be at least 1");
  ResidualReport beta{"cocycle U(m+n,k) = U(m,k) beta^m(U(n,k))", 0, sample_count, seed};
  ResidualReport alpha{"cocycle U(n,k+l) = U(n,k) alpha^k(U(n,l))", 0, sample_count, seed};
  ResidualReport unitary{"cocycle |U(n,k)| = 1", 0, sample_count, seed};
  detail::Sampler sampler(seed);
  const int reach = 2 * bound;
  for (std::size_t s = 0; s < sample_count; ++s) {
    auto [x, y] = sampler.next();
    detail::CocycleTable at(g, reach, x, y);
    std::vector<detail::CocycleTable> beta_shift, alpha_shift;
    for (int m = -bound; m <= bound; ++m) beta_shift.emplace_back(g, reach, x - m, y - 2 * g.nu * m);
    for (int k = -bound; k <= bound; ++k) alpha_shift.emplace_back(g, reach, x - k * g.alpha_shift(), y);
    for (int a = -bound; a <= bound; ++a)
      for (int b = -bound; b <= bound; ++b) {
        unitary.max_residual = std::max(unitary.max_residual, std::abs(std::abs(at(a, b)) - 1.0));
        for (int k = -bound; k <= bound; ++k) {
          // (m, n) = (a, b)
          Complex lhs = at(a + b, k);
          Complex rhs = at(a, k) * beta_shift[static_cast<std::size_t>(a + bound)](b, k);
          beta.max_residual = std::max(beta.max_residual, std::abs(lhs - rhs));
          // (k, l) = (a, b), n = k
          Complex lhs2 = at(k, a + b);
          Complex rhs2 = at(k, a) * alpha_shift[static_cast<std::size_t>(a + bound)](k, b);
          alpha.max_residual = std::max(alpha.max_residual, std::abs(lhs2 - rhs2));
        }
      }
  }
  return {beta, alpha, unitary};
}

// ---------------------------------------------------------------------------
// Intertwiners

enum class Side { Alpha, Beta };

/// (H_α φ)(x, y) = φ(2μx, y), (H_β φ)(x, y) = φ(x, 2νx − y).
inline SampledFunction map_H(Side side, const SampledFunction& phi, const GeometrySpec& g) {
  if (phi.tag != Membership::CT2) throw std::invalid_argument("map_H expects a function on T^2");
  if (side == Side::Alpha) return SampledFunction{[phi, g](double x, double y) { return phi(2 * g.mu * x, y); }, Membership::None};
  return SampledFunction{[phi, g](double x, double y) { return phi(x, 2 * g.nu * x - y); }, Membership::None};
}

/// (J_α f)(x, y) = f(2μx, y), (J_β f)(x, y) = e(c x(x+1) ν) f(x, 2νx − y).
inline SampledFunction map_J(Side side, const SampledFunction& f, const GeometrySpec& g) {
  if (f.tag != Membership::Mc) throw std::invalid_argument("map_J expects a section of M^c");
  if (side == Side::Alpha)
    return SampledFunction{[f, g](double x, double y) { return f(2 * g.mu * x, y); }, Membership::XalphaU};
  return SampledFunction{[f, g](double x, double y) { return e(g.c * x * (x + 1) * g.nu) * f(x, 2 * g.nu * x - y); },
                         Membership::XbetaUstar};
}

/// |lhs − rhs| of the defining relation of F's membership tag at (x, y).
inline double membership_defect_at(const SampledFunction& f, const GeometrySpec& g, double x, double y) {
  switch (f.tag) {
    case Membership::Mc:
      return std::abs(f(x + 1, y) - e(-g.c * y) * f(x, y));
    case Membership::XalphaU:
      return std::abs(f(x - g.alpha_shift(), y) - e(g.c * y) * f(x, y));
    case Membership::XbetaUstar:
      return std::abs(f(x + 1, y + 2 * g.nu) - e(g.c * (y + 2 * g.nu)) * f(x, y));
    case Membership::CT2:
      return std::max(std::abs(f(x + 1, y) - f(x, y)), std::abs(f(x, y + 1) - f(x, y)));
    case Membership::None:
      return 0;
  }
  return 0;
}

inline ResidualReport check_membership(const SampledFunction& f, const GeometrySpec& g, std::size_t samples,
                                       std::uint64_t seed = 1) {
  ResidualReport r{"membership " + to_string(f.tag), 0, samples, seed};
  detail::Sampler sampler(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    auto [x, y] = sampler.next();
    r.max_residual = std::max(r.max_residual, membership_defect_at(f, g, x, y));
  }
  return r;
}

/// The module actions and inner products of the twisted bimodules, pointwise.
namespace structure {

/// M^c_{α_{μν}}: f·φ = f α_{μν}(φ) with α_{μν}(φ)(s, t) = φ(s − 2μ, t − 2ν).
inline Complex mc_right_action(const SampledFunction& f, const SampledFunction& phi, double mu, double nu, double x,
                               double y) {
  return f(x, y) * phi(x - 2 * mu, y - 2 * nu);
}

/// ⟨f, g⟩_R = α_{μν}^{-1}(f̄ g).
inline Complex mc_right_inner(const SampledFunction& f, const SampledFunction& g, double mu, double nu, double x, double y) {
  return std::conj(f(x + 2 * mu, y + 2 * nu)) * g(x + 2 * mu, y + 2 * nu);
}

}  // namespace structure

/// Residuals of J(φf) = H(φ)J(f), J(fφ) = J(f)H(φ), ⟨Jf, Jg⟩_L = H⟨f, g⟩_L,
/// ⟨Jf, Jg⟩_R = H⟨f, g⟩_R on both sides, plus membership of J_α f and J_β f.
/// Side α uses M^c over (μ, ν); side β uses M^c over (1/(4μ), ν/(2μ)).
inline std::vector<ResidualReport> check_intertwining(const SampledFunction& f, const SampledFunction& g,
                                                      const SampledFunction& phi, const GeometrySpec& spec,
                                                      std::size_t samples, std::uint64_t seed = 1) {
  if (f.tag != Membership::Mc || g.tag != Membership::Mc) throw std::invalid_argument("f and g must be M^c sections");
  if (phi.tag != Membership::CT2) throw std::invalid_argument("phi must be a function on T^2");
  const GeometrySpec flip = spec.flipped();
  std::vector<ResidualReport> out;
  for (Side side : {Side::Alpha, Side::Beta}) {
    const std::string tag = side == Side::Alpha ? "alpha" : "beta";
    const double mu = side == Side::Alpha ? spec.mu : flip.mu;
    const double nu = side == Side::Alpha ? spec.nu : flip.nu;
    const SampledFunction jf = map_J(side, f, spec), jg = map_J(side, g, spec), hphi = map_H(side, phi, spec);
    const SampledFunction phi_f{[&](double x, double y) { return phi(x, y) * f(x, y); }, Membership::Mc};
    const SampledFunction f_phi{[&](double x, double y) { return structure::mc_right_action(f, phi, mu, nu, x, y); },
                                Membership::Mc};
    const SampledFunction j_phi_f = map_J(side, phi_f, spec), j_f_phi = map_J(side, f_phi, spec);
    const SampledFunction inner_l{[&](double x, double y) { return f(x, y) * std::conj(g(x, y)); }, Membership::CT2};
    const SampledFunction inner_r{[&](double x, double y) { return structure::mc_right_inner(f, g, mu, nu, x, y); },
                                  Membership::CT2};
    const SampledFunction h_inner_l = map_H(side, inner_l, spec), h_inner_r = map_H(side, inner_r, spec);
    // The right structure of X^{α,u}_β is twisted by β, that of X^{β,u*}_α by α.
    auto shift = [&](double x, double y, int dir) -> std::pair<double, double> {
      if (side == Side::Alpha) return {x - dir * 1.0, y - dir * 2 * spec.nu};
      return {x - dir * spec.alpha_shift(), y};
    };
    ResidualReport left{"J_" + tag + "(phi f) = H_" + tag + "(phi) J_" + tag + "(f)", 0, samples, seed};
    ResidualReport right{"J_" + tag + "(f phi) = J_" + tag + "(f) H_" + tag + "(phi)", 0, samples, seed};
    ResidualReport ipl{"<J_" + tag + " f, J_" + tag + " g>_L = H_" + tag + "(<f, g>_L)", 0, samples, seed};
    ResidualReport ipr{"<J_" + tag + " f, J_" + tag + " g>_R = H_" + tag + "(<f, g>_R)", 0, samples, seed};
    ResidualReport member{"membership of J_" + tag + " f in " + to_string(jf.tag), 0, samples, seed};
    detail::Sampler sampler(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      auto [x, y] = sampler.next();
      left.max_residual = std::max(left.max_residual, std::abs(j_phi_f(x, y) - hphi(x, y) * jf(x, y)));
      auto [bx, by] = shift(x, y, 1);
      right.max_residual = std::max(right.max_residual, std::abs(j_f_phi(x, y) - jf(x, y) * hphi(bx, by)));
      ipl.max_residual = std::max(ipl.max_residual, std::abs(jf(x, y) * std::conj(jg(x, y)) - h_inner_l(x, y)));
      auto [ix, iy] = shift(x, y, -1);
      ipr.max_residual =
          std::max(ipr.max_residual, std::abs(std::conj(jf(ix, iy)) * jg(ix, iy) - h_inner_r(x, y)));
      member.max_residual = std::max(member.max_residual, membership_defect_at(jf, spec, x, y));
    }
    out.insert(out.end(), {left, right, ipl, ipr, member});
  }
  return out;
}

/// Default sections and test function used by the `verify` subcommand.
struct StandardInputs {
  SampledFunction f, g, phi;
};

inline StandardInputs standard_inputs(int c, std::uint64_t seed) {
  return StandardInputs{make_mc_section(smooth_bump(-0.3, 1.7, 1.0), c), make_mc_section(hat(0.2, 2.4, 0.7), c),
                        random_trig_polynomial(2, seed)};
}

inline std::vector<ResidualReport> verify_all(const GeometrySpec& spec, std::size_t samples, std::uint64_t seed) {
  std::vector<ResidualReport> out = check_cocycle_identities(spec, samples, seed);
  StandardInputs in = standard_inputs(spec.c, seed);
  for (auto& r : check_intertwining(in.f, in.g, in.phi, spec, samples, seed)) out.push_back(std::move(r));
  return out;
}

}  // namespace qhm::bimodule
