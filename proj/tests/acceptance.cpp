// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <qhm/qhm.hpp>

#include <chrono>
#include <cstdint>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

using namespace qhm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(const std::string& why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(why);
  }
};

int report(int id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << title << " (" << o.detail << ")\n";
  for (const auto& f : o.failures) std::cout << "    " << f << "\n";
  std::cout.flush();
  return o.pass ? 0 : 1;
}

std::string describe(const QHMParams& p) {
  return "(c=" + p.c.get_str() + ", mu=" + p.mu.to_string() + ", nu=" + p.nu.to_string() + ")";
}

const std::vector<int> kSquarefree{2, 3, 5, 6, 7, 10, 11, 13};

/// (a + b√d)/den with b ≠ 0 and den ≤ 10.
std::string random_surd(std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<int> a(-5, 5), b(1, 5), sgn(0, 1), den(1, 10);
  int bb = b(rng) * (sgn(rng) ? 1 : -1);
  return "(" + std::to_string(a(rng)) + " + " + std::to_string(bb) + "*sqrt(" + std::to_string(d) + "))/" +
         std::to_string(den(rng));
}

int pick(std::mt19937_64& rng, const std::vector<int>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

/// All decided pairs, replayed reversed by the symmetry criterion.
std::vector<std::pair<QHMParams, QHMParams>> g_suite_pairs;

bool witness_verifies(const Verdict& v, const QHMParams& p, const QHMParams& p2, std::string& why) {
  WitnessCheck w = check_witness(to_json(v, p, p2));
  if (!w.ok) {
    why.clear();
    for (const auto& m : w.messages) why += m + "; ";
  }
  return w.ok;
}

std::optional<std::size_t> solution_dim(const Verdict& v) {
  for (const auto& s : v.trace)
    if (s.rule == "scaled-search" || s.rule == "lattice-crosscheck")
      if (s.data.contains("dim_S")) return s.data.at("dim_S").get<std::size_t>();
  return std::nullopt;
}

Outcome criterion_fmu() {
  Outcome o;
  std::mt19937_64 rng(101);
  const auto t0 = Clock::now();
  int count = 0;
  for (int i = 0; i < 100; ++i) {
    AlgebraicReal mu = parse_algebraic(random_surd(rng, pick(rng, kSquarefree)));
    AlgebraicReal nu = parse_algebraic(random_surd(rng, pick(rng, kSquarefree)));
    long c = std::uniform_int_distribution<long>(1, 3)(rng);
    QHMParams p(c, mu, nu);
    QHMParams p2(c, AlgebraicReal(1) / (AlgebraicReal(4) * mu), nu / (AlgebraicReal(2) * mu));
    g_suite_pairs.emplace_back(p, p2);
    Verdict v = decide_equivalence(p, p2);
    std::string why;
    if (!v.equivalent()) {
      o.fail("not Equivalent: " + describe(p) + " -> " + v.kind());
    } else if (!witness_verifies(v, p, p2, why)) {
      o.fail("witness rejected for " + describe(p) + ": " + why);
    }
    ++count;
  }
  double t = seconds_since(t0);
  if (t >= 60) o.fail("runtime " + std::to_string(t) + " s exceeds 60 s");
  o.detail = std::to_string(count) + " pairs, " + std::to_string(t) + " s";
  return o;
}

GL3 random_block(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> entry(-2, 2), shape(0, 2);
  for (;;) {
    long a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
    long det = a * d - b * c;
    if (det != 1 && det != -1) continue;
    switch (shape(rng)) {
      case 0:
        return GL3{{a, b, entry(rng)}, {c, d, entry(rng)}, {0, 0, 1}};
      case 1:
        return GL3{{a, 0, b}, {0, 1, 0}, {c, 0, d}};
      default:
        return GL3{{a, b, 0}, {c, d, 0}, {0, 0, 1}};
    }
  }
}

Outcome criterion_gl3() {
  Outcome o;
  std::mt19937_64 rng(202);
  int unknown_high_dim = 0, found = 0;
  const auto t0 = Clock::now();
  for (int i = 0; i < 50; ++i) {
    int d1 = pick(rng, kSquarefree), d2 = d1;
    while (d2 == d1) d2 = pick(rng, kSquarefree);
    AlgebraicReal mu = parse_algebraic(random_surd(rng, d1)), nu = parse_algebraic(random_surd(rng, d2));
    long c = std::uniform_int_distribution<long>(1, 3)(rng);
    int len = std::uniform_int_distribution<int>(1, 4)(rng);
    GL3 word;
    for (int k = 0; k < len; ++k) word = word * random_block(rng);
    auto [mu2, nu2] = gl3_act(word, mu, nu);
    QHMParams p(c, mu, nu), p2(c, mu2, nu2);
    g_suite_pairs.emplace_back(p, p2);
    Verdict v = decide_equivalence(p, p2);
    std::string why;
    if (const auto* eq = v.equivalent()) {
      ++found;
      if (!eq->gl3) {
        o.fail("no GL3 witness for " + describe(p));
      } else {
        auto [m, n] = gl3_act(*eq->gl3, mu, nu);
        if (!(m == mu2 && n == nu2)) o.fail("gl3_act(witness) mismatch for " + describe(p));
      }
      if (!witness_verifies(v, p, p2, why)) o.fail("witness rejected: " + why);
    } else if (v.unknown()) {
      auto dim = solution_dim(v);
      if (!dim || *dim <= 1) {
        o.fail("Unknown with dim S <= 1 for " + describe(p) + " and word " + word.to_string());
      } else {
        ++unknown_high_dim;
      }
    } else {
      o.fail("NotEquivalent for " + describe(p) + " and word " + word.to_string());
    }
  }
  std::ostringstream os;
  os << found << "/50 Equivalent, Unknown rate (dim S >= 2) " << unknown_high_dim << "/50, " << seconds_since(t0) << " s";
  o.detail = os.str();
  return o;
}

Outcome criterion_c_obstruction() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<long> cdist(1, 9);
  std::uniform_int_distribution<int> kind(0, 2), num(-9, 9), den(1, 9);
  auto random_value = [&]() -> AlgebraicReal {
    switch (kind(rng)) {
      case 0:
        return AlgebraicReal(ratio(num(rng), den(rng)));
      default:
        return parse_algebraic(random_surd(rng, pick(rng, kSquarefree)));
    }
  };
  for (int i = 0; i < 50; ++i) {
    long c = cdist(rng), c2 = c;
    while (c2 == c) c2 = cdist(rng);
    QHMParams p(c, random_value(), random_value()), p2(c2, random_value(), random_value());
    g_suite_pairs.emplace_back(p, p2);
    Verdict v = decide_equivalence(p, p2);
    const auto* ne = v.not_equivalent();
    if (!ne || ne->certificate.kind != CertificateKind::CMismatch) {
      o.fail("expected CMismatch for " + describe(p) + " vs " + describe(p2) + ", got " + v.kind());
    } else if (integer_from_json(ne->certificate.values.at("c")) == integer_from_json(ne->certificate.values.at("c2"))) {
      o.fail("certificate values coincide");
    }
  }
  o.detail = "50 pairs";
  return o;
}

Outcome criterion_rank1() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> num(-30, 30), den(1, 30);
  std::uniform_int_distribution<long> cdist(1, 5);
  for (int i = 0; i < 50; ++i) {
    long c = cdist(rng);
    AlgebraicReal mu(ratio(num(rng), den(rng)));
    QHMParams p(c, mu, AlgebraicReal(ratio(num(rng), den(rng))));
    QHMParams p2(c, AlgebraicReal(0), AlgebraicReal(0));
    g_suite_pairs.emplace_back(p, p2);
    Verdict v = decide_equivalence(p, p2);
    std::string why;
    bool collapsed = false;
    for (const auto& s : v.trace) collapsed = collapsed || s.rule == "rank1-collapse";
    if (!v.equivalent()) {
      o.fail("not Equivalent to (c, 0, 0): " + describe(p));
    } else if (!collapsed) {
      o.fail("no rank-1 collapse in trace: " + describe(p));
    } else if (!witness_verifies(v, p, p2, why)) {
      o.fail("witness rejected: " + why);
    }
  }
  o.detail = "50 rational pairs";
  return o;
}

/// Nonzero Euclidean remainders q, p, ... and the number of division steps.
std::pair<std::vector<std::int64_t>, int> euclid_oracle(std::int64_t q, std::int64_t p) {
  std::vector<std::int64_t> seq{q, p};
  int steps = 0;
  std::int64_t a = q, b = p;
  while (b != 0) {
    std::int64_t r = a % b;
    ++steps;
    if (r != 0) seq.push_back(r);
    a = b;
    b = r;
  }
  return {seq, steps};
}

Outcome criterion_dif() {
  Outcome o;
  const AlgebraicReal nu = parse_algebraic("sqrt(2)");
  int count = 0;
  for (std::int64_t q = 2; q <= 60; ++q)
    for (std::int64_t p = 1; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      ++count;
      DifResult d = reduce_dif(QHMParams(1, AlgebraicReal(ratio(Integer(static_cast<long>(p)), Integer(static_cast<long>(2 * q)))), nu));
      auto [seq, steps] = euclid_oracle(q, p);
      std::vector<std::int64_t> got;
      for (const auto& r : d.remainders) got.push_back(r.get_si());
      std::string tag = std::to_string(p) + "/" + std::to_string(q);
      if (!d.params.mu.is_zero()) o.fail(tag + ": rational slot not 0");
      if (!(d.params.nu == AlgebraicReal(Integer(q)) * nu)) o.fail(tag + ": irrational slot is not q*nu");
      if (got != seq) o.fail(tag + ": remainder sequence differs from the oracle");
      if (static_cast<int>(d.chain_length) != steps) o.fail(tag + ": chain length differs from the oracle step count");
      if (seq.back() != 1) o.fail(tag + ": oracle does not end at 1");
    }
  o.detail = std::to_string(count) + " coprime pairs";
  return o;
}

Outcome criterion_serret() {
  Outcome o;
  SerretResult s0 = serret_equivalent(parse_algebraic("sqrt(2)"), parse_algebraic("sqrt(3)"));
  if (s0.kind != SerretKind::NotEquivalent) o.fail("(sqrt 2, sqrt 3) not NotEquivalent");
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<long> entry(-3, 3);
  int count = 0;
  for (int i = 0; i < 100; ++i) {
    AlgebraicReal x = parse_algebraic(random_surd(rng, pick(rng, kSquarefree)));
    long a, b, c, d;
    do {
      a = entry(rng), b = entry(rng), c = entry(rng), d = entry(rng);
    } while (a * d - b * c != 1 && a * d - b * c != -1);
    GL2 m{{a, b}, {c, d}};
    AlgebraicReal y = gl2_act(m, x);
    SerretResult s = serret_equivalent(x, y);
    ++count;
    if (s.kind != SerretKind::Equivalent || !s.witness) {
      o.fail("not Equivalent: x = " + x.to_string() + ", A = " + m.to_string());
    } else if (!(gl2_act(*s.witness, x) == y)) {
      o.fail("witness does not map x to y for x = " + x.to_string());
    }
  }
  o.detail = "1 inequivalent pair, " + std::to_string(count) + " equivalent pairs";
  return o;
}

Outcome criterion_bimodule() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0;
  std::string worst_name;
  const std::vector<std::pair<double, double>> params{{1 / std::sqrt(2.0), 1 / std::sqrt(3.0)}, {0.3, 0.7}};
  for (auto [mu, nu] : params)
    for (int c : {1, 2, 3}) {
      bimodule::GeometrySpec spec(mu, nu, c);
      for (const auto& r : bimodule::verify_all(spec, 10000, 7)) {
        if (r.max_residual > worst) {
          worst = r.max_residual;
          worst_name = r.identity_name;
        }
        if (!(r.max_residual < 1e-9))
          o.fail(r.identity_name + " residual " + std::to_string(r.max_residual) + " at c=" + std::to_string(c));
      }
    }
  double t = seconds_since(t0);
  if (t >= 30) o.fail("runtime " + std::to_string(t) + " s exceeds 30 s");
  std::ostringstream os;
  os << "max residual " << worst << " (" << worst_name << "), " << t << " s";
  o.detail = os.str();
  return o;
}

Outcome criterion_lattice() {
  Outcome o;
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 12);
  const FieldContext q(AlgebraicReal(0));
  const std::int64_t scale = 27720;  // lcm(1, ..., 12)
  long checked = 0;
  for (int i = 0; i < 30; ++i) {
    // Degree-1 trace groups Z + a/b Z + c/d Z.
    std::vector<Rational> gens{Rational(1)};
    while (gens.size() < 3) {
      Rational g(num(rng), den(rng));
      g.canonicalize();
      if (g != 0) gens.push_back(g);
    }
    RatLattice lat(q, {{gens[0]}, {gens[1]}, {gens[2]}});
    std::vector<std::int64_t> scaled;
    for (const auto& g : gens) scaled.push_back(Rational(g * scale).get_num().get_si());
    std::unordered_set<std::int64_t> reachable;
    for (std::int64_t x = -40; x <= 40; ++x)
      for (std::int64_t y = -40; y <= 40; ++y)
        for (std::int64_t z = -40; z <= 40; ++z) reachable.insert(x * scaled[0] + y * scaled[1] + z * scaled[2]);
    for (int n = -20; n <= 20; ++n)
      for (int d = 1; d <= 12; ++d) {
        Rational v(n, d);
        v.canonicalize();
        bool hnf = lat.contains({v});
        bool brute = reachable.count(Rational(v * scale).get_num().get_si()) > 0;
        ++checked;
        if (hnf != brute)
          o.fail("lattice <1, " + to_string(gens[1]) + ", " + to_string(gens[2]) + ">: disagreement on " + to_string(v));
      }
  }
  o.detail = "30 lattices, " + std::to_string(checked) + " membership queries";
  return o;
}

Outcome criterion_symmetry() {
  Outcome o;
  int equivalent = 0;
  for (const auto& [p, p2] : g_suite_pairs) {
    Verdict v = decide_equivalence(p, p2), w = decide_equivalence(p2, p);
    if (v.kind() != w.kind()) {
      o.fail("kinds differ for " + describe(p) + " vs " + describe(p2) + ": " + v.kind() + " / " + w.kind());
      continue;
    }
    if (v.equivalent()) {
      ++equivalent;
      if (!(v.equivalent()->r * w.equivalent()->r == AlgebraicReal(1)))
        o.fail("r * r' != 1 for " + describe(p) + " vs " + describe(p2));
    }
  }
  o.detail = std::to_string(g_suite_pairs.size()) + " pairs, " + std::to_string(equivalent) + " with r * r' = 1 checked";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto run = [&](int id, const std::string& title, Outcome (*fn)()) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
      o.detail = "aborted";
    }
    failures += report(id, title, o);
  };
  run(1, "fmu metamorphic suite", criterion_fmu);
  run(2, "GL3 metamorphic suite", criterion_gl3);
  run(3, "c obstruction", criterion_c_obstruction);
  run(4, "rank-1 collapse", criterion_rank1);
  run(5, "dif chain against a Euclid oracle", criterion_dif);
  run(6, "continued fraction (Serret) suite", criterion_serret);
  run(7, "bimodule residuals", criterion_bimodule);
  run(8, "lattice membership oracle", criterion_lattice);
  run(9, "symmetry of verdicts", criterion_symmetry);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " criteria FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}
