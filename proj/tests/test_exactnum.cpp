// Exact integers, rationals, polynomials and real algebraic numbers.

#include <qhm/qhm.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace qhm;

namespace {

constexpr unsigned kBits = 640;

mpf_class to_mpf(const Rational& r) { return mpf_class(r, kBits); }

mpf_class mpf_sqrt(const Rational& r) {
  mpf_class out(0, kBits);
  mpf_sqrt(out.get_mpf_t(), to_mpf(r).get_mpf_t());
  return out;
}

/// Midpoint of a 10^-80 enclosure, as an mpf.
mpf_class approx(const AlgebraicReal& x) {
  Rational w(1, Integer("1" + std::string(80, '0'), 10));
  Interval iv = x.approximate(w);
  return to_mpf((iv.lo + iv.hi) / 2);
}

bool close(const mpf_class& a, const mpf_class& b) {
  mpf_class tol(1, kBits);
  mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), 200);
  return abs(a - b) < tol;
}

/// (a + b sqrt(d)) / den with its high-precision value.
struct Sample {
  AlgebraicReal exact;
  mpf_class value;
};

Sample random_surd(std::mt19937_64& rng, const std::vector<int>& ds) {
  std::uniform_int_distribution<int> coef(-9, 9), den(1, 7);
  std::uniform_int_distribution<std::size_t> pick(0, ds.size() - 1);
  int a = coef(rng), b = coef(rng), dd = den(rng), d = ds[pick(rng)];
  if (b == 0) b = 1;
  AlgebraicReal s = parse_algebraic("sqrt(" + std::to_string(d) + ")");
  AlgebraicReal e = (AlgebraicReal(a) + AlgebraicReal(b) * s) / AlgebraicReal(dd);
  mpf_class v = (to_mpf(Rational(a)) + to_mpf(Rational(b)) * mpf_sqrt(Rational(d))) / to_mpf(Rational(dd));
  return {e, v};
}

}  // namespace

TEST(Integer, FloorDivisionRoundsDown) {
  EXPECT_EQ(floor_div(Integer(7), Integer(2)), 3);
  EXPECT_EQ(floor_div(Integer(-7), Integer(2)), -4);
  EXPECT_EQ(floor_div(Integer(7), Integer(-2)), -4);
  EXPECT_EQ(floor(Rational(7, 2)), 3);
  EXPECT_EQ(floor(Rational(-1, 3)), -1);
  EXPECT_EQ(ceil(Rational(-1, 3)), 0);
}

TEST(Integer, ExtendedGcdBezout) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> dist(-100000, 100000);
  for (int i = 0; i < 200; ++i) {
    Integer a = dist(rng), b = dist(rng);
    ExtendedGcd e = xgcd(a, b);
    EXPECT_EQ(e.s * a + e.t * b, gcd(a, b));
  }
}

TEST(Integer, SquareRoots) {
  EXPECT_EQ(isqrt(Integer(99)), 9);
  EXPECT_EQ(isqrt(Integer(100)), 10);
  EXPECT_TRUE(is_perfect_square(Integer(144)));
  EXPECT_FALSE(is_perfect_square(Integer(145)));
  EXPECT_EQ(exact_root(Rational(9, 4), 2), Rational(3, 2));
  EXPECT_FALSE(exact_root(Rational(2), 2).has_value());
}

TEST(Integer, RatioCanonicalizes) {
  Rational r = ratio(Integer(4), Integer(-6));
  EXPECT_EQ(r.get_num(), -2);
  EXPECT_EQ(r.get_den(), 3);
  EXPECT_THROW(ratio(Integer(1), Integer(0)), std::domain_error);
}

TEST(Integer, ParseRational) {
  EXPECT_EQ(parse_rational("-3/4"), Rational(-3, 4));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("6/8"), Rational(3, 4));
}

TEST(Polynomial, SturmCountsRoots) {
  IntPoly f{-2, 0, 1};
  SturmSequence s(f);
  EXPECT_EQ(s.count_closed(Rational(0), Rational(2)), 1);
  EXPECT_EQ(s.count_closed(Rational(-2), Rational(2)), 2);
  IntPoly cubic{0, -1, 0, 1};  // x^3 - x
  auto roots = isolate_real_roots(cubic);
  ASSERT_EQ(roots.size(), 3u);
  for (const auto& [lo, hi] : roots) EXPECT_EQ(SturmSequence(cubic).count_closed(lo, hi), 1);
}

TEST(Polynomial, Factorization) {
  IntPoly f{1, 0, -10, 0, 1};
  EXPECT_TRUE(is_irreducible(f));
  IntPoly g = IntPoly{-2, 0, 1} * IntPoly{-3, 0, 1};
  auto fs = irreducible_factors(g);
  ASSERT_EQ(fs.size(), 2u);
  IntPoly prod{1};
  for (const auto& h : fs) prod = prod * h;
  EXPECT_EQ(primitive_part(prod), primitive_part(g));
}

TEST(Polynomial, FactorsReproduceRandomProducts) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int t = 0; t < 30; ++t) {
    IntPoly a{c(rng), c(rng), 1}, b{c(rng), c(rng), c(rng), 1};
    IntPoly g = a * b;
    auto fs = irreducible_factors(g);
    IntPoly prod{1};
    for (const auto& h : fs) {
      EXPECT_TRUE(is_irreducible(h));
      EXPECT_TRUE(divide_exact(g, h).has_value());
    }
    for (const auto& h : fs) prod = prod * h;
    // Every factor of the squarefree part appears exactly once.
    EXPECT_TRUE(divide_exact(g, squarefree_part(g)).has_value());
    EXPECT_EQ(primitive_part(prod).degree(), squarefree_part(g).degree());
  }
}

TEST(Parse, RationalLiteral) {
  AlgebraicReal x = parse_algebraic("1/2");
  EXPECT_TRUE(x.is_rational());
  EXPECT_EQ(x.minpoly(), (IntPoly{-1, 2}));
  EXPECT_EQ(x.lo(), 0);
  EXPECT_EQ(x.hi(), 1);
}

TEST(Parse, SquareRootOfTwo) {
  AlgebraicReal x = parse_algebraic("sqrt(2)");
  EXPECT_EQ(x.minpoly(), (IntPoly{-2, 0, 1}));
  EXPECT_EQ(x.lo(), 1);
  EXPECT_EQ(x.hi(), 2);
}

TEST(Parse, MixedExpressionMatchesHighPrecision) {
  AlgebraicReal x = parse_algebraic("sqrt(2)/2 + 1/3");
  EXPECT_EQ(x.degree(), 2);
  mpf_class oracle = mpf_sqrt(Rational(2)) / 2 + to_mpf(Rational(1, 3));
  EXPECT_TRUE(close(approx(x), oracle));
  EXPECT_EQ(x.to_decimal(4).substr(0, 6), "1.0404");
}

TEST(Parse, ExplicitRoot) {
  AlgebraicReal x = parse_algebraic("root(x^3 - 2; 1, 2)");
  EXPECT_EQ(x.degree(), 3);
  mpf_class oracle(0, kBits);
  mpf_class two = to_mpf(Rational(2));
  // Newton iteration for the real cube root of 2.
  oracle = 1.25;
  for (int i = 0; i < 20; ++i) oracle = oracle - (oracle * oracle * oracle - two) / (3 * oracle * oracle);
  EXPECT_TRUE(close(approx(x), oracle));
}

TEST(Parse, RejectsMalformedInput) {
  EXPECT_THROW(parse_algebraic("abc"), ParseError);
  EXPECT_THROW(parse_algebraic("sqrt(2"), ParseError);
  EXPECT_THROW(parse_algebraic("1/0"), std::exception);
  EXPECT_THROW(parse_algebraic("sqrt(-1)"), std::exception);
}

TEST(Arithmetic, SpecExamples) {
  AlgebraicReal s2 = parse_algebraic("sqrt(2)"), s3 = parse_algebraic("sqrt(3)");
  EXPECT_EQ(s2 * s2, AlgebraicReal(2));
  EXPECT_TRUE((s2 * s2).is_rational());
  AlgebraicReal sum = s2 + s3;
  EXPECT_EQ(sum.minpoly(), (IntPoly{1, 0, -10, 0, 1}));
  EXPECT_EQ(sum.lo(), 3);
  EXPECT_EQ(sum.hi(), 4);
  AlgebraicReal half = s2 / AlgebraicReal(2);
  EXPECT_EQ((AlgebraicReal(4) * half).inverse(), s2 / AlgebraicReal(4));
}

TEST(Arithmetic, SignExamples) {
  EXPECT_EQ(sign(AlgebraicReal(0)), 0);
  EXPECT_EQ(sign(parse_algebraic("sqrt(2) - 1")), 1);
  EXPECT_EQ(sign(parse_algebraic("sqrt(2) - 577/408")), -1);
}

TEST(Arithmetic, FloorExamples) {
  EXPECT_EQ(floor(AlgebraicReal(Rational(7, 2))), 3);
  EXPECT_EQ(floor(parse_algebraic("sqrt(3)")), 1);
  EXPECT_EQ(floor(parse_algebraic("-sqrt(2)")), -2);
}

TEST(Arithmetic, OrderingAndEquality) {
  AlgebraicReal a = parse_algebraic("sqrt(2)"), b = parse_algebraic("sqrt(8)/2");
  EXPECT_EQ(a, b);
  EXPECT_LT(a, parse_algebraic("sqrt(3)"));
  EXPECT_GT(a, AlgebraicReal(Rational(141, 100)));
  EXPECT_LT(a, AlgebraicReal(Rational(142, 100)));
}

TEST(Arithmetic, SqrtOfAlgebraic) {
  AlgebraicReal x = sqrt(parse_algebraic("3 + 2*sqrt(2)"));
  EXPECT_EQ(x, parse_algebraic("1 + sqrt(2)"));
  EXPECT_EQ(sqrt(AlgebraicReal(Rational(9, 4))), AlgebraicReal(Rational(3, 2)));
}

TEST(ArithmeticProperty, FieldAxiomsAgainstHighPrecision) {
  std::mt19937_64 rng(2024);
  const std::vector<int> ds{2, 3, 5};
  for (int t = 0; t < 200; ++t) {
    Sample x = random_surd(rng, ds), y = random_surd(rng, {2});
    EXPECT_EQ(x.exact + y.exact, y.exact + x.exact);
    EXPECT_EQ(x.exact * y.exact, y.exact * x.exact);
    EXPECT_TRUE((x.exact - x.exact).is_zero());
    EXPECT_EQ(x.exact * x.exact.inverse(), AlgebraicReal(1));
    EXPECT_TRUE(close(approx(x.exact + y.exact), x.value + y.value));
    EXPECT_TRUE(close(approx(x.exact * y.exact), x.value * y.value));
  }
}

TEST(ArithmeticProperty, DistributivityInOneField) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    Sample x = random_surd(rng, {3}), y = random_surd(rng, {3}), z = random_surd(rng, {3});
    EXPECT_EQ(x.exact * (y.exact + z.exact), x.exact * y.exact + x.exact * z.exact);
    EXPECT_EQ((x.exact + y.exact) + z.exact, x.exact + (y.exact + z.exact));
  }
}

TEST(ArithmeticProperty, SignIsMultiplicative) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    Sample x = random_surd(rng, {2, 3, 5, 7}), y = random_surd(rng, {2});
    EXPECT_EQ(sign(x.exact * y.exact), sign(x.exact) * sign(y.exact));
    EXPECT_EQ(sign(x.exact), sgn(x.value));
  }
}

TEST(ArithmeticProperty, FloorBounds) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 200; ++t) {
    Sample x = random_surd(rng, {2, 3, 5, 6, 7, 10});
    Integer n = floor(x.exact);
    EXPECT_LE(AlgebraicReal(n), x.exact);
    EXPECT_LT(x.exact, AlgebraicReal(Integer(n + 1)));
    mpf_class f = floor(x.value);
    EXPECT_EQ(Integer(f), n);
  }
}

TEST(Field, CommonFieldOfTwoSquareRoots) {
  AlgebraicReal s2 = parse_algebraic("sqrt(2)"), s3 = parse_algebraic("sqrt(3)");
  CommonField cf = common_field({s2, s3});
  EXPECT_EQ(cf.field.degree(), 4);
  EXPECT_EQ(cf.field.to_real(cf.coords[0]), s2);
  EXPECT_EQ(cf.field.to_real(cf.coords[1]), s3);
}

TEST(Field, CommonFieldCollapsesSameField) {
  CommonField cf = common_field({parse_algebraic("sqrt(2)/2"), parse_algebraic("sqrt(8) + 1")});
  EXPECT_EQ(cf.field.degree(), 2);
  CommonField q = common_field({AlgebraicReal(Rational(1, 4)), AlgebraicReal(Rational(1, 6))});
  EXPECT_EQ(q.field.degree(), 1);
  EXPECT_EQ(q.coords[1], (RatVec{Rational(1, 6)}));
}

TEST(Field, OperationsMatchAlgebraicArithmetic) {
  CommonField cf = common_field({parse_algebraic("sqrt(2)"), parse_algebraic("sqrt(5)")});
  const FieldContext& k = cf.field;
  RatVec a = cf.coords[0], b = cf.coords[1];
  EXPECT_EQ(k.to_real(k.mul(a, b)), parse_algebraic("sqrt(10)"));
  EXPECT_EQ(k.to_real(k.inverse(k.add(a, b))), (parse_algebraic("sqrt(2)") + parse_algebraic("sqrt(5)")).inverse());
  EXPECT_TRUE(k.self_check());
  EXPECT_EQ(locate(k, parse_algebraic("sqrt(10)")).has_value(), true);
  EXPECT_FALSE(locate(k, parse_algebraic("sqrt(3)")).has_value());
}

TEST(FieldProperty, CoordinatesEvaluateToTheElements) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    Sample x = random_surd(rng, {2, 3, 5, 7}), y = random_surd(rng, {2, 3, 5, 7});
    CommonField cf = common_field({x.exact, y.exact});
    const FieldContext& k = cf.field;
    // Evaluate the coordinate polynomials at a high-precision θ.
    mpf_class theta = approx(k.theta());
    auto eval = [&](const RatVec& v) {
      mpf_class acc(0, kBits);
      for (std::size_t i = v.size(); i-- > 0;) acc = acc * theta + to_mpf(v[i]);
      return acc;
    };
    EXPECT_TRUE(close(eval(cf.coords[0]), x.value));
    EXPECT_TRUE(close(eval(cf.coords[1]), y.value));
  }
}
