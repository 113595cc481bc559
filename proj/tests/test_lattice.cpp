// Rational lattices inside number fields and the trace group G.

#include <qhm/qhm.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qhm;

namespace {

AlgebraicReal A(const std::string& s) { return parse_algebraic(s); }

Rational Q(long n, long d) { return ratio(Integer(n), Integer(d)); }

/// Lattice spanned by real generators, all inside Q(√2).
RatLattice lattice_of(const std::vector<AlgebraicReal>& gens) {
  static const FieldContext k(A("sqrt(2)"));
  std::vector<RatVec> v;
  for (const auto& g : gens) v.push_back(*locate(k, g));
  return RatLattice(k, v);
}

/// Integer matrix with determinant ±1 from a random product of elementary moves.
std::vector<std::vector<long>> random_unimodular(std::mt19937_64& rng, int n) {
  std::vector<std::vector<long>> m(static_cast<std::size_t>(n), std::vector<long>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
  std::uniform_int_distribution<int> idx(0, n - 1), k(-2, 2);
  for (int s = 0; s < 6; ++s) {
    int i = idx(rng), j = idx(rng);
    if (i == j) continue;
    long f = k(rng);
    for (int c = 0; c < n; ++c) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] += f * m[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)];
  }
  return m;
}

}  // namespace

TEST(HermiteNormalForm, KnownMatrix) {
  IntMatrix h = hermite_normal_form({{Integer(2), Integer(4)}, {Integer(1), Integer(3)}});
  ASSERT_EQ(h.size(), 2u);
  // Z-span of (2,4),(1,3) is (1,1)Z + (0,2)Z.
  EXPECT_EQ(h[0][0], 1);
  EXPECT_EQ(h[1][0], 0);
  EXPECT_EQ(h[1][1], 2);
}

TEST(TraceGroup, RankExamples) {
  TraceGroup z = trace_group(AlgebraicReal(0), AlgebraicReal(0));
  EXPECT_EQ(z.rank(), 1);
  EXPECT_EQ(z.lattice.basis(), (std::vector<RatVec>{{Rational(1)}}));

  TraceGroup q = trace_group(AlgebraicReal(Rational(1, 4)), AlgebraicReal(Rational(1, 6)));
  EXPECT_EQ(q.rank(), 1);
  // 1, 1/2, 1/3 generate (1/6)Z.
  EXPECT_EQ(q.lattice.basis(), (std::vector<RatVec>{{Rational(1, 6)}}));

  EXPECT_EQ(trace_group(A("sqrt(2)/2"), A("sqrt(3)/2")).rank(), 3);
  EXPECT_EQ(trace_group(A("sqrt(2)/2"), AlgebraicReal(Rational(1, 4))).rank(), 2);
  EXPECT_EQ(trace_group(A("sqrt(2)/2"), A("sqrt(2)")).rank(), 2);
}

TEST(Lattice, EqualityExamples) {
  RatLattice a = lattice_of({A("1"), A("sqrt(2)")});
  RatLattice b = lattice_of({A("1 + sqrt(2)"), A("sqrt(2)")});
  EXPECT_TRUE(lattice_equal(a, b));
  RatLattice c = lattice_of({A("1"), A("2*sqrt(2)")});
  EXPECT_FALSE(lattice_equal(a, c));
  RatLattice d = lattice_of({A("1"), A("sqrt(2)"), A("1/2 + sqrt(2)")});
  EXPECT_FALSE(lattice_equal(a, d));
}

TEST(Lattice, ScaleExamples) {
  RatLattice l = lattice_of({A("1"), A("sqrt(2)")});
  RatLattice s = scale(l, A("sqrt(2)"));
  RatLattice expected = lattice_of({A("2"), A("sqrt(2)")});
  EXPECT_TRUE(lattice_equal(s, expected));
  EXPECT_TRUE(lattice_equal(scale(s, A("sqrt(2)").inverse()), l));
  EXPECT_THROW(scale(l, AlgebraicReal(0)), std::exception);
}

TEST(Lattice, IndexExamples) {
  RatLattice l = lattice_of({A("1"), A("sqrt(2)")});
  EXPECT_EQ(index(l, l), 1);
  RatLattice z = lattice_of({A("1")}), z2 = lattice_of({A("2")});
  EXPECT_EQ(z.rank(), 1);
  EXPECT_EQ(index(z2, z), 2);
  RatLattice sub = lattice_of({A("1"), A("2*sqrt(2)")});
  EXPECT_EQ(index(sub, l), 2);
  EXPECT_THROW(index(l, sub), std::invalid_argument);
}

TEST(Lattice, ContainsMembership) {
  RatLattice l = lattice_of({A("1/3"), A("sqrt(2)/2")});
  const FieldContext& k = l.context();
  auto coords = [&](const std::string& s) { return *locate(k, A(s)); };
  EXPECT_TRUE(l.contains(coords("2/3 + 3*sqrt(2)/2")));
  EXPECT_FALSE(l.contains(coords("1/2")));
  EXPECT_FALSE(l.contains(coords("sqrt(2)/4")));
}

TEST(Rank2Basis, SquareRootTwoExample) {
  // G = Z + √2 Z + (1/2)Z = αZ + (1/2)Z with α = √2 - 1 after reduction.
  TraceGroup g = trace_group(A("sqrt(2)/2"), AlgebraicReal(Rational(1, 4)));
  Rank2Basis b = basis_rank2(g);
  EXPECT_EQ(b.q, 2);
  EXPECT_EQ(b.alpha, A("sqrt(2) - 1"));
  EXPECT_GT(b.alpha, AlgebraicReal(0));
  EXPECT_LT(b.alpha, AlgebraicReal(Rational(1, 2)));
}

TEST(Rank2Basis, SquareRootThreeExample) {
  TraceGroup g = trace_group(A("sqrt(3)/2"), A("sqrt(3)"));
  Rank2Basis b = basis_rank2(g);
  EXPECT_EQ(b.q, 1);
  EXPECT_EQ(b.alpha, A("sqrt(3) - 1"));
}

TEST(Rank2Basis, SymmetricInMuAndNu) {
  Rank2Basis a = basis_rank2(trace_group(A("sqrt(2)/2"), AlgebraicReal(Rational(1, 4))));
  Rank2Basis b = basis_rank2(trace_group(AlgebraicReal(Rational(1, 4)), A("sqrt(2)/2")));
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.alpha, b.alpha);
}

TEST(Rank2Basis, RejectsOtherRanks) {
  EXPECT_THROW(basis_rank2(trace_group(A("sqrt(2)/2"), A("sqrt(3)/2"))), std::invalid_argument);
  EXPECT_THROW(basis_rank2(trace_group(AlgebraicReal(0), AlgebraicReal(0))), std::invalid_argument);
}

TEST(LatticeProperty, BasisChangeInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> c(-6, 6), den(1, 6);
  for (int t = 0; t < 60; ++t) {
    // Three random elements of Q(√2, √3); a unimodular change of generators keeps the lattice.
    CommonField cf = common_field({A("sqrt(2)"), A("sqrt(3)")});
    const FieldContext& k = cf.field;
    std::vector<RatVec> gens;
    for (int i = 0; i < 3; ++i) {
      RatVec v = k.zero();
      v = k.add(v, k.from_rational(Q(c(rng), den(rng))));
      v = k.add(v, k.scale(cf.coords[0], Q(c(rng), den(rng))));
      v = k.add(v, k.scale(cf.coords[1], Q(c(rng), den(rng))));
      gens.push_back(v);
    }
    auto u = random_unimodular(rng, 3);
    std::vector<RatVec> moved;
    for (std::size_t i = 0; i < 3; ++i) {
      RatVec v = k.zero();
      for (std::size_t j = 0; j < 3; ++j) v = k.add(v, k.scale(gens[j], Rational(u[i][j])));
      moved.push_back(v);
    }
    RatLattice a(k, gens), b(k, moved);
    EXPECT_TRUE(lattice_equal(a, b));
    EXPECT_EQ(index(a, b), 1);
    // Basis regenerates the lattice and every generator is a member.
    RatLattice from_basis(k, a.basis());
    EXPECT_TRUE(lattice_equal(a, from_basis));
    for (const auto& g : gens) EXPECT_TRUE(a.contains(g));
  }
}

TEST(LatticeProperty, EqualityIsAnEquivalenceRelation) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> c(-5, 5), den(1, 4);
  CommonField cf = common_field({A("sqrt(5)")});
  const FieldContext& k = cf.field;
  std::vector<RatLattice> pool;
  for (int t = 0; t < 12; ++t) {
    std::vector<RatVec> gens;
    for (int i = 0; i < 3; ++i)
      gens.push_back(k.add(k.from_rational(Q(c(rng), den(rng))), k.scale(cf.coords[0], Q(c(rng) % 2, den(rng)))));
    pool.emplace_back(k, gens);
  }
  for (const auto& a : pool) {
    EXPECT_TRUE(lattice_equal(a, a));
    for (const auto& b : pool) {
      EXPECT_EQ(lattice_equal(a, b), lattice_equal(b, a));
      for (const auto& c2 : pool)
        if (lattice_equal(a, b) && lattice_equal(b, c2)) EXPECT_TRUE(lattice_equal(a, c2));
    }
  }
}

TEST(LatticeProperty, ScalingRoundTrip) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> c(-7, 7), den(1, 5);
  for (int t = 0; t < 40; ++t) {
    TraceGroup g = trace_group(AlgebraicReal(Q(c(rng), den(rng))) + A("sqrt(7)") * AlgebraicReal(Q(1, den(rng))),
                               AlgebraicReal(Q(c(rng), den(rng))));
    const FieldContext& k = g.context();
    RatVec r = k.add(k.from_rational(Q(c(rng) == 0 ? 1 : 2, den(rng))), k.scale(k.theta_vector(), Q(1, den(rng))));
    RatLattice s = scale(g.lattice, r);
    EXPECT_EQ(s.rank(), g.rank());
    EXPECT_TRUE(lattice_equal(scale(s, k.inverse(r)), g.lattice));
  }
}

TEST(LatticeProperty, Rank2BasisGeneratesG) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> c(-9, 9), den(1, 8);
  const std::vector<std::string> roots{"sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(6)", "sqrt(7)"};
  std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
  for (int t = 0; t < 60; ++t) {
    AlgebraicReal s = A(roots[pick(rng)]);
    int b1 = c(rng);
    if (b1 == 0) b1 = 1;
    AlgebraicReal mu = AlgebraicReal(Q(c(rng), den(rng))) + AlgebraicReal(Q(b1, den(rng))) * s;
    AlgebraicReal nu = AlgebraicReal(Q(c(rng), den(rng))) + AlgebraicReal(Q(c(rng), den(rng))) * s;
    TraceGroup g = trace_group(mu, nu);
    ASSERT_EQ(g.rank(), 2);
    Rank2Basis b = basis_rank2(g);
    const FieldContext& k = g.context();
    RatLattice regen(k, {b.alpha_coords, k.from_rational(Rational(1, b.q))});
    EXPECT_TRUE(lattice_equal(regen, g.lattice));
    EXPECT_GT(b.alpha, AlgebraicReal(0));
    EXPECT_LT(b.alpha, AlgebraicReal(Rational(1, b.q)));
    EXPECT_EQ(k.to_real(b.alpha_coords), b.alpha);
  }
}
