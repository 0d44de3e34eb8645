#include <dybe/specfun.hpp>

#include <gtest/gtest.h>

using namespace dybe;
using namespace dybe::specfun;

namespace {
const EllipticParams P{Complex(0.0, 0.8)};
}

TEST(Theta, VanishesAtZero) { EXPECT_LT(std::abs(theta(0.0, P)), 1e-14); }

TEST(Theta, IsOdd) {
  Complex u(0.37, 0.11);
  EXPECT_LT(std::abs(theta(-u, P) + theta(u, P)), 1e-14);
}

TEST(Theta, AntiperiodicInOne) {
  for (int J : {truncation(0.3, P), truncation(0.3, P) + 4}) {
    Complex a = theta_truncated(1.3, P, J), b = theta_truncated(0.3, P, J);
    EXPECT_LT(std::abs(a + b), 1e-13) << "J=" << J;
  }
}

TEST(Theta, QuasiPeriodicInTau) {
  const Complex i(0.0, 1.0);
  for (Complex u : {Complex(0.3, 0.0), Complex(0.1, -0.2), Complex(-0.45, 0.1)}) {
    Complex lhs = theta(u + P.tau, P);
    Complex rhs = -std::exp(-pi * i * P.tau - 2.0 * pi * i * u) * theta(u, P);
    EXPECT_LT(std::abs(lhs - rhs), 10 * P.target_tol * std::max(1.0, std::abs(rhs))) << u;
  }
}

TEST(Theta, TruncationIsStable) {
  for (int k = 0; k < 10; ++k) {
    Complex u(-0.5 + 0.1 * k, 0.03 * (k - 5));
    int J = truncation(u, P);
    EXPECT_GE(J, 8);
    EXPECT_LT(std::abs(theta_truncated(u, P, J) - theta_truncated(u, P, J + 4)), 2 * P.target_tol);
  }
}

TEST(Theta, RejectsLowerHalfPlane) {
  EXPECT_THROW(EllipticParams(Complex(0.0, -1.0)), std::invalid_argument);
  EllipticParams bad;
  bad.tau = Complex(1.0, 0.0);
  EXPECT_THROW(theta(0.2, bad), std::invalid_argument);
}

TEST(ThetaDerivative, EvenAndNonzeroAtOrigin) {
  Complex u(0.21, -0.07);
  EXPECT_LT(std::abs(theta_d(-u, P) - theta_d(u, P)), 1e-13);
  EXPECT_GT(std::abs(theta_d(0.0, P)), 0.1);
}

TEST(ThetaDerivative, MatchesCentralDifference) {
  double h = 1e-5;
  Complex fd = (theta(0.3 + h, P) - theta(0.3 - h, P)) / (2 * h);
  EXPECT_LT(std::abs(fd - theta_d(0.3, P)), 1e-8);
}

TEST(StripReduction, RecoversTheta) {
  Complex u(0.2, 1.9);
  auto r = reduce_to_strip(u, P);
  EXPECT_LE(std::abs(r.u0.imag()), P.tau.imag() / 2 + 1e-12);
  Complex direct = theta_truncated(u, P, 40);
  EXPECT_LT(std::abs(r.factor * theta(r.u0, P) - direct), 1e-10 * std::abs(direct));
  auto d = reduce_to_strip(Complex(0.2, -1.7), P);
  EXPECT_LT(std::abs(d.factor * theta(d.u0, P) - theta_truncated(Complex(0.2, -1.7), P, 40)), 1e-10);
}

TEST(Wave, KindsDelegate) {
  EXPECT_EQ(wave(WaveKind::rational, 2.5), Complex(2.5));
  EXPECT_LT(std::abs(wave(WaveKind::trig, pi)), 1e-15);
  EXPECT_EQ(wave(WaveKind::elliptic, 0.3, P), theta(0.3, P));
  EXPECT_THROW(wave(WaveKind::elliptic, 0.3), std::invalid_argument);
}
