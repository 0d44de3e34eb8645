#include <dybe/matrix.hpp>
#include <dybe/series.hpp>

#include <gtest/gtest.h>

using namespace dybe;

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1) / 2);
  EXPECT_EQ(parse_rational("0.25"), Rational(1) / 4);
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
}

TEST(Rational, IntegerPowers) {
  Rational h = Rational(1) / 2;
  EXPECT_EQ(ipow(h, 3), Rational(1) / 8);
  EXPECT_EQ(ipow(h, -2), Rational(4));
  EXPECT_EQ(ipow(h, 0), Rational(1));
}

TEST(Matrix, ExactInverseRoundTrips) {
  Matrix<Rational> m(3, 3);
  int vals[9] = {2, 1, 0, 1, 3, 1, 0, 1, 4};
  for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = vals[i];
  auto inv = m.inverse();
  EXPECT_EQ(m * inv, Matrix<Rational>::identity(3));
  EXPECT_EQ(inv * m, Matrix<Rational>::identity(3));
}

TEST(Matrix, SingularMatrixIsReported) {
  Matrix<Rational> m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 2;
  m(1, 0) = 2;
  m(1, 1) = 4;
  EXPECT_THROW(m.inverse(), SingularMatrix);
}

TEST(Matrix, FloatInverseUsesPivoting) {
  Matrix<Complex> m(2, 2);
  m(0, 0) = 1e-18;
  m(0, 1) = 1;
  m(1, 0) = 1;
  m(1, 1) = 1;
  auto r = m * m.inverse() - Matrix<Complex>::identity(2);
  EXPECT_LT(r.sup_norm(), 1e-15);
}

TEST(Matrix, KroneckerMatchesIndexConvention) {
  auto a = Matrix<Rational>::unit(2, 0, 1);
  auto b = Matrix<Rational>::unit(3, 2, 0);
  auto k = kron(a, b);
  // (e_0 ⊗ e_2)(e_1 ⊗ e_0)^T
  EXPECT_EQ(k(0 * 3 + 2, 1 * 3 + 0), Rational(1));
  EXPECT_EQ(k.sup_norm(), 1.0);
}

TEST(Series, GeometricSeriesInverse) {
  int N = 6;
  Series<Rational> one_minus_x({Rational(1), Rational(-1)}, N);
  auto g = Series<Rational>(Rational(1)) / one_minus_x;
  for (int k = 0; k <= N; ++k) EXPECT_EQ(g[k], Rational(1));
  EXPECT_EQ(g.order(), N);
  EXPECT_EQ(g * one_minus_x, Series<Rational>(Rational(1)).truncate(N));
}

TEST(Series, DivisionByPoleAtZeroThrows) {
  Series<Rational> x = Series<Rational>::monomial(1, 5);
  EXPECT_THROW(Series<Rational>(Rational(1)) / x, ResonanceError);
}

TEST(Series, ScaledSubstitution) {
  Series<Rational> g({Rational(1), Rational(2), Rational(3)}, 4);
  auto h = g.scaled(Rational(1) / 2);
  EXPECT_EQ(h[1], Rational(1));
  EXPECT_EQ(h[2], Rational(3) / 4);
}

TEST(Series, ExactPolynomialsMultiplyWithoutTruncation) {
  Series<Rational> a({Rational(1), Rational(1)}, Series<Rational>::exact_order);
  auto sq = a * a;
  EXPECT_EQ(sq[2], Rational(1));
  EXPECT_FALSE(sq.truncated());
}

TEST(Series, MatrixOverSeriesInverts) {
  int N = 5;
  Matrix<Series<Rational>> m(2, 2);
  m(0, 0) = Series<Rational>(Rational(1));
  m(0, 1) = Series<Rational>::monomial(1, N);
  m(1, 0) = Series<Rational>(Rational(0));
  m(1, 1) = Series<Rational>({Rational(1), Rational(-1)}, N);
  auto inv = m.inverse();
  auto id = m * inv;
  EXPECT_EQ(id(0, 0), Series<Rational>(Rational(1)));
  EXPECT_EQ(id(0, 1), Series<Rational>(Rational(0)));
  EXPECT_EQ(id(1, 1), Series<Rational>(Rational(1)));
}
