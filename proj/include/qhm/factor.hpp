#pragma once

// Factorisation of integer polynomials into irreducibles over Q
// (Berlekamp-Zassenhaus: distinct/equal degree factorisation modulo a small
// prime, linear Hensel lifting, exhaustive recombination).

#include <qhm/polynomial.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace qhm {

namespace detail {

using u64 = std::uint64_t;
using ModPoly = std::vector<u64>;

inline u64 mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline void mp_trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int mp_deg(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ModPoly mp_from(const IntPoly& f, u64 p) {
  ModPoly out(f.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mpz_fdiv_ui(f.coeffs()[i].get_mpz_t(), p);
  mp_trim(out);
  return out;
}

inline ModPoly mp_sub(ModPoly a, const ModPoly& b, u64 p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  mp_trim(a);
  return a;
}

inline ModPoly mp_add(ModPoly a, const ModPoly& b, u64 p) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  mp_trim(a);
  return a;
}

inline ModPoly mp_mul(const ModPoly& a, const ModPoly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  ModPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  mp_trim(out);
  return out;
}

inline std::pair<ModPoly, ModPoly> mp_divrem(ModPoly a, const ModPoly& b, u64 p) {
  int db = mp_deg(b);
  if (mp_deg(a) < db) return {{}, a};
  ModPoly q(static_cast<std::size_t>(mp_deg(a) - db + 1), 0);
  u64 inv = invmod(b.back(), p);
  for (int i = mp_deg(a); i >= db; --i) {
    u64 f = mulmod(a[static_cast<std::size_t>(i)], inv, p);
    if (f == 0) continue;
    q[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j) {
      auto& slot = a[static_cast<std::size_t>(i - db + j)];
      slot = (slot + p - mulmod(f, b[static_cast<std::size_t>(j)], p)) % p;
    }
  }
  a.resize(static_cast<std::size_t>(db));
  mp_trim(a);
  mp_trim(q);
  return {q, a};
}

inline ModPoly mp_rem(const ModPoly& a, const ModPoly& b, u64 p) { return mp_divrem(a, b, p).second; }

inline ModPoly mp_monic(ModPoly a, u64 p) {
  if (a.empty()) return a;
  u64 inv = invmod(a.back(), p);
  for (auto& c : a) c = mulmod(c, inv, p);
  return a;
}

inline ModPoly mp_gcd(ModPoly a, ModPoly b, u64 p) {
  while (!b.empty()) {
    ModPoly r = mp_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return mp_monic(a, p);
}

/// s*a + t*b = 1 for coprime a, b.
inline std::pair<ModPoly, ModPoly> mp_bezout(const ModPoly& a, const ModPoly& b, u64 p) {
  ModPoly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = mp_divrem(r0, r1, p);
    ModPoly s2 = mp_sub(s0, mp_mul(q, s1, p), p);
    ModPoly t2 = mp_sub(t0, mp_mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  u64 inv = invmod(r0.back(), p);
  for (auto& c : s0) c = mulmod(c, inv, p);
  for (auto& c : t0) c = mulmod(c, inv, p);
  return {s0, t0};
}

inline ModPoly mp_derivative(const ModPoly& a, u64 p) {
  if (a.size() <= 1) return {};
  ModPoly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = mulmod(a[i], i % p, p);
  mp_trim(out);
  return out;
}

inline ModPoly mp_powmod(ModPoly base, const Integer& e, const ModPoly& mod, u64 p) {
  ModPoly result{1};
  base = mp_rem(base, mod, p);
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mp_rem(mp_mul(result, result, p), mod, p);
    if (mpz_tstbit(e.get_mpz_t(), i)) result = mp_rem(mp_mul(result, base, p), mod, p);
  }
  return result;
}

inline std::vector<std::pair<ModPoly, int>> distinct_degree(ModPoly f, u64 p) {
  std::vector<std::pair<ModPoly, int>> out;
  ModPoly x{0, 1};
  ModPoly h = mp_rem(x, f, p);
  for (int i = 1; 2 * i <= mp_deg(f); ++i) {
    h = mp_powmod(h, Integer(static_cast<unsigned long>(p)), f, p);
    ModPoly g = mp_gcd(mp_sub(h, x, p), f, p);
    if (mp_deg(g) > 0) {
      out.emplace_back(g, i);
      f = mp_divrem(f, g, p).first;
      h = mp_rem(h, f, p);
    }
  }
  if (mp_deg(f) > 0) out.emplace_back(mp_monic(f, p), mp_deg(f));
  return out;
}

inline void equal_degree(const ModPoly& g, int d, u64 p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
  if (mp_deg(g) == d) {
    out.push_back(g);
    return;
  }
  Integer e;
  mpz_ui_pow_ui(e.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
  e = (e - 1) / 2;
  std::uniform_int_distribution<u64> dist(0, p - 1);
  while (true) {
    ModPoly a(static_cast<std::size_t>(mp_deg(g)));
    for (auto& c : a) c = dist(rng);
    mp_trim(a);
    if (mp_deg(a) < 1) continue;
    ModPoly b = mp_sub(mp_powmod(a, e, g, p), ModPoly{1}, p);
    ModPoly h = mp_gcd(b, g, p);
    if (mp_deg(h) > 0 && mp_deg(h) < mp_deg(g)) {
      equal_degree(h, d, p, rng, out);
      equal_degree(mp_divrem(g, h, p).first, d, p, rng, out);
      return;
    }
  }
}

/// Monic irreducible factors of a squarefree monic polynomial mod p.
inline std::vector<ModPoly> factor_mod(const ModPoly& f, u64 p) {
  std::mt19937_64 rng(0x5eed ^ p);
  std::vector<ModPoly> out;
  for (auto& [g, d] : distinct_degree(f, p)) equal_degree(g, d, p, rng, out);
  return out;
}

inline IntPoly lift_to_int(const ModPoly& a) {
  std::vector<Integer> v;
  v.reserve(a.size());
  for (u64 c : a) v.emplace_back(static_cast<unsigned long>(c));
  return IntPoly(std::move(v));
}

inline IntPoly reduce_mod(const IntPoly& a, const Integer& m) {
  std::vector<Integer> v;
  v.reserve(a.coeffs().size());
  for (const auto& c : a.coeffs()) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
    v.push_back(r);
  }
  return IntPoly(std::move(v));
}

inline IntPoly symmetric_mod(const IntPoly& a, const Integer& m) {
  Integer half = m / 2;
  IntPoly r = reduce_mod(a, m);
  std::vector<Integer> v;
  for (const auto& c : r.coeffs()) v.push_back(c > half ? Integer(c - m) : c);
  return IntPoly(std::move(v));
}

/// Lifts target = g*h (mod p), g and h monic and coprime mod p, to a
/// factorisation modulo p^steps.
inline std::pair<IntPoly, IntPoly> hensel_lift(const IntPoly& target, const ModPoly& g0, const ModPoly& h0, u64 p,
                                               int steps) {
  auto [s, t] = mp_bezout(g0, h0, p);
  IntPoly g = lift_to_int(g0), h = lift_to_int(h0);
  Integer pk = static_cast<unsigned long>(p);
  Integer pnext = pk * static_cast<unsigned long>(p);
  for (int k = 1; k < steps; ++k) {
    IntPoly e = reduce_mod(target - g * h, pnext);
    std::vector<Integer> scaled;
    for (const auto& c : e.coeffs()) scaled.push_back(c / pk);
    ModPoly ep = mp_from(IntPoly(std::move(scaled)), p);
    ModPoly dg = mp_rem(mp_mul(t, ep, p), g0, p);
    ModPoly dh = mp_divrem(mp_sub(ep, mp_mul(dg, h0, p), p), g0, p).first;
    g = g + lift_to_int(dg) * pk;
    h = h + lift_to_int(dh) * pk;
    pk = pnext;
    pnext *= static_cast<unsigned long>(p);
  }
  return {reduce_mod(g, pk), reduce_mod(h, pk)};
}

inline bool is_small_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Irreducible factors of a primitive squarefree polynomial with nonzero
/// constant term and degree >= 2.
inline std::vector<IntPoly> zassenhaus(const IntPoly& f) {
  const Integer lc = f.lead();
  // Pick the prime with the fewest modular factors among a few candidates.
  u64 best_p = 0;
  std::vector<ModPoly> best;
  int tried = 0;
  for (u64 p = 3; tried < 6 && p < 100000; p += 2) {
    if (!is_small_prime(p)) continue;
    if (mpz_fdiv_ui(lc.get_mpz_t(), p) == 0) continue;
    ModPoly fp = mp_monic(mp_from(f, p), p);
    if (mp_deg(mp_gcd(fp, mp_derivative(fp, p), p)) > 0) continue;
    ++tried;
    auto facs = factor_mod(fp, p);
    if (best_p == 0 || facs.size() < best.size()) {
      best_p = p;
      best = std::move(facs);
    }
    if (best.size() == 1) return {f};
  }
  if (best_p == 0) throw std::runtime_error("zassenhaus: no suitable prime");
  const u64 p = best_p;

  // Coefficient bound for any factor scaled by lc: |lc| * 2^n * ||f||_1.
  Integer norm = 0;
  for (const auto& c : f.coeffs()) norm += abs_value(c);
  Integer bound = abs_value(lc) * norm;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(f.degree() + 1));
  int steps = 1;
  Integer modulus = static_cast<unsigned long>(p);
  while (modulus <= bound) {
    modulus *= static_cast<unsigned long>(p);
    ++steps;
  }

  // Monic target lc^{-1} f mod p^steps, lifted factor by factor.
  Integer lc_inv;
  mpz_invert(lc_inv.get_mpz_t(), lc.get_mpz_t(), modulus.get_mpz_t());
  IntPoly target = reduce_mod(f * lc_inv, modulus);
  std::vector<IntPoly> lifted;
  for (std::size_t i = 0; i + 1 < best.size(); ++i) {
    ModPoly rest{1};
    for (std::size_t j = i + 1; j < best.size(); ++j) rest = mp_mul(rest, best[j], p);
    auto [g, h] = hensel_lift(target, best[i], rest, p, steps);
    lifted.push_back(std::move(g));
    target = std::move(h);
  }
  lifted.push_back(target);

  std::vector<IntPoly> result;
  IntPoly rem = f;
  std::vector<IntPoly> pool = std::move(lifted);
  std::size_t size = 1;
  while (2 * size <= pool.size()) {
    bool found = false;
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      Integer lead = rem.lead();
      Integer c0 = lead;
      for (auto i : idx) c0 = c0 * pool[i].coeff(0);
      mpz_fdiv_r(c0.get_mpz_t(), c0.get_mpz_t(), modulus.get_mpz_t());
      if (c0 > modulus / 2) c0 -= modulus;
      Integer rc0 = rem.coeff(0) * lead;
      if (c0 != 0 && mpz_divisible_p(rc0.get_mpz_t(), c0.get_mpz_t())) {
        IntPoly cand = IntPoly::constant(lead);
        for (auto i : idx) cand = reduce_mod(cand * pool[i], modulus);
        cand = primitive_part(symmetric_mod(cand, modulus));
        if (auto q = divide_exact(rem, cand)) {
          result.push_back(cand);
          rem = primitive_part(*q);
          std::vector<IntPoly> next;
          for (std::size_t i = 0, k = 0; i < pool.size(); ++i) {
            if (k < idx.size() && idx[k] == i) {
              ++k;
              continue;
            }
            next.push_back(pool[i]);
          }
          pool = std::move(next);
          found = true;
          break;
        }
      }
      // Next combination in lexicographic order.
      std::size_t k = size;
      while (k > 0 && idx[k - 1] == pool.size() - size + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++size;
  }
  if (rem.degree() > 0) result.push_back(rem);
  return result;
}

}  // namespace detail

/// Distinct irreducible factors over Q of a nonzero polynomial, each
/// primitive with positive leading coefficient, sorted by degree.
inline std::vector<IntPoly> irreducible_factors(const IntPoly& p) {
  if (p.is_zero()) throw std::domain_error("irreducible_factors of zero polynomial");
  IntPoly f = squarefree_part(p);
  std::vector<IntPoly> out;
  if (f.degree() <= 0) return out;
  if (f.coeff(0) == 0) {
    out.push_back(IntPoly{0, 1});
    std::vector<Integer> shifted(f.coeffs().begin() + 1, f.coeffs().end());
    f = primitive_part(IntPoly(std::move(shifted)));
  }
  if (f.degree() == 1) {
    out.push_back(f);
  } else if (f.degree() == 2) {
    Integer disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0) * f.coeff(2);
    if (is_perfect_square(disc)) {
      Integer s = isqrt(disc);
      out.push_back(primitive_part(IntPoly{f.coeff(1) - s, 2 * f.coeff(2)}));
      out.push_back(primitive_part(IntPoly{f.coeff(1) + s, 2 * f.coeff(2)}));
    } else {
      out.push_back(f);
    }
  } else if (f.degree() > 2) {
    for (auto& g : detail::zassenhaus(f)) out.push_back(std::move(g));
  }
  std::stable_sort(out.begin(), out.end(), [](const IntPoly& a, const IntPoly& b) { return a.degree() < b.degree(); });
  return out;
}

inline bool is_irreducible(const IntPoly& p) {
  if (p.degree() <= 0) return false;
  if (squarefree_part(p).degree() != p.degree()) return false;
  auto f = irreducible_factors(p);
  return f.size() == 1 && f.front().degree() == p.degree();
}

}  // namespace qhm
