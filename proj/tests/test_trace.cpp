#include <dybe/trace.hpp>

#include <gtest/gtest.h>

using namespace dybe;
using namespace dybe::trace;

namespace {

const Rational q(1, 2);
using Alg = RankOneAlgebra<Rational>;

Alg quantum() { return Alg::quantum(q); }

std::vector<Rational> mu_samples() { return {Rational(3, 5), Rational(7, 4), Rational(2, 9)}; }

}  // namespace

TEST(WeylDenominator, Values) {
  EXPECT_EQ(weyl_denominator(Rational(1)), Rational(0));
  EXPECT_EQ(weyl_denominator(Rational(1, 2)), Rational(-3, 2));
  EXPECT_EQ(weyl_denominator(Rational(3)), -weyl_denominator(Rational(1, 3)));
}

TEST(Character, RankOneValues) {
  auto alg = quantum();
  Rational Q(3, 5);
  EXPECT_EQ(character(fusion::fd_module(alg, 0), Q), Rational(1));
  EXPECT_EQ(character(fusion::fd_module(alg, 1), Q), Q + 1 / Q);
  auto chi1 = character(fusion::fd_module(alg, 1), Q);
  EXPECT_EQ(chi1 * chi1, character(fusion::fd_module(alg, 2), Q) + character(fusion::fd_module(alg, 0), Q));
}

TEST(PsiSeries, TrivialModuleIsGeometric) {
  auto alg = quantum();
  auto P = psi_series(alg, fusion::fd_module(alg, 0), Rational(5, 3), 8);
  EXPECT_EQ(P.prefactor_sign, 1);
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(P[k], Rational(1));
}

TEST(PsiSeries, L2LeadingCoefficientAndIntertwinerCheck) {
  auto alg = quantum();
  auto V = fusion::fd_module(alg, 2);
  Rational z(5, 3);
  auto P = psi_series(alg, V, z, 4);
  EXPECT_EQ(P[0], Rational(1));
  EXPECT_NE(P[1], Rational(1));
  auto phi = fusion::verma_intertwiner(alg, V, 1, z, 4);
  EXPECT_EQ(fusion::intertwiner_defect(alg, V, phi, z), 0.0);
}

TEST(TraceF, TrivialModuleIsPurePrefactor) {
  auto alg = quantum();
  for (const auto& Qmu : mu_samples()) {
    auto F = trace_F(alg, fusion::fd_module(alg, 0), Qmu, 10);
    EXPECT_EQ(F.prefactor_sign, -1);
    EXPECT_EQ(F[0], Rational(1));
    for (int k = 1; k <= 10; ++k) EXPECT_EQ(F[k], Rational(0));
  }
}

TEST(TraceF, L2NormalizedLeadingCoefficient) {
  auto alg = quantum();
  auto V = fusion::fd_module(alg, 2);
  for (const auto& Qmu : mu_samples()) {
    auto F = trace_F(alg, V, Qmu, 6);
    EXPECT_EQ(F[0] * q_scalar(alg, V, Qmu), Rational(1));
  }
}

TEST(TraceF, TruncationConsistency) {
  auto alg = quantum();
  auto V = fusion::fd_module(alg, 2);
  auto a = trace_F(alg, V, Rational(3, 5), 8), b = trace_F(alg, V, Rational(3, 5), 10);
  for (int k = 0; k <= 8; ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(TraceF, RejectsOddModuleAndClassicalQ) {
  auto alg = quantum();
  EXPECT_THROW(trace_F(alg, fusion::fd_module(alg, 1), Rational(3, 5), 4), std::invalid_argument);
  auto cl = Alg::classical_case();
  EXPECT_THROW(trace_F(cl, fusion::fd_module(cl, 2), Rational(3, 5), 4), std::domain_error);
}

TEST(MacdonaldOp, TrivialVGivesWeightMultiplicities) {
  auto D = macdonald_op(q, 2, 0, 8);
  ASSERT_EQ(D.terms.size(), 3u);
  for (const auto& [m, T] : D.terms) EXPECT_EQ(T, Series<Rational>(Rational(1))) << m;
  auto alg = series_algebra(q);
  auto W = fusion::tensor_module(fusion::fd_module(alg, 1), fusion::fd_module(alg, 1));
  auto Dt = macdonald_op(alg, W, fusion::fd_module(alg, 0), 8);
  EXPECT_EQ(Dt.terms.at(0), Series<Rational>(Rational(2)));
}

TEST(MacdonaldOp, L1OnTrivialTraceGivesCharacter) {
  // D_{L1} q^{−l_λ l_μ} = (q^{−l_μ} + q^{l_μ}) q^{−l_λ l_μ}
  for (const auto& Qmu : mu_samples()) {
    auto d = eigen_defect(q, 0, 1, Qmu, 10);
    for (const auto& c : d) EXPECT_EQ(c, Rational(0));
  }
}

TEST(MacdonaldOp, L1OnL2RegressionCoefficients) {
  auto D = macdonald_op(q, 1, 2, 6);
  ASSERT_EQ(D.terms.size(), 2u);
  EXPECT_EQ(D.terms.at(1), Series<Rational>(Rational(1)));
  const auto& T = D.terms.at(-1);
  std::vector<Rational> expected{1, Rational(-45, 16), Rational(-225, 64), Rational(-945, 256), Rational(-3825, 1024)};
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(T[k], expected[k]) << k;
}

TEST(Eigen, ExactOnListedPairs) {
  EXPECT_EQ(eigen_check(q, 0, 1, mu_samples(), 12).residual_max, 0.0);
  EXPECT_EQ(eigen_check(q, 2, 1, mu_samples(), 10).residual_max, 0.0);
  EXPECT_EQ(eigen_check(q, 2, 2, mu_samples(), 10).residual_max, 0.0);
  EXPECT_TRUE(eigen_check(q, 4, 1, {Rational(5, 7)}, 8).pass);
  EXPECT_EQ(eigen_check(Rational(2, 3), 2, 1, {Rational(5, 7)}, 8).residual_max, 0.0);
}

TEST(Eigen, DroppingWeylDenominatorBreaksIt) {
  auto rep = eigen_check(q, 2, 1, mu_samples(), 10, 0.0, true);
  EXPECT_FALSE(rep.pass);
  auto d = eigen_defect(q, 2, 1, Rational(3, 5), 10, true);
  bool early = d[0] != 0 || d[1] != 0;
  EXPECT_TRUE(early);
}

TEST(Eigen, SolutionBasisRecursion) {
  for (int w : {1, 2})
    for (const auto& Qmu : mu_samples()) EXPECT_EQ(solution_basis_defect(q, 2, w, Qmu, 10), 0.0) << w;
}

TEST(Commutativity, TrivialSecondOperator) {
  auto D1 = macdonald_op(q, 1, 2, 10), D0 = macdonald_op(q, 0, 2, 10);
  EXPECT_EQ(operator_difference(compose(D1, D0), D1, 10), 0.0);
  EXPECT_EQ(operator_difference(compose(D0, D1), D1, 10), 0.0);
}

TEST(Commutativity, OperatorsCommuteExactly) {
  EXPECT_EQ(commutativity_check(q, 1, 2, 2, 10).residual_max, 0.0);
  EXPECT_EQ(commutativity_check(q, 1, 1, 2, 10).residual_max, 0.0);
  EXPECT_EQ(commutativity_check(q, 2, 3, 2, 8).residual_max, 0.0);
}

TEST(Commutativity, TensorProductIsComposition) {
  EXPECT_EQ(tensor_product_defect(q, 1, 1, 2, 10), 0.0);
  EXPECT_EQ(tensor_product_defect(q, 1, 2, 2, 8), 0.0);
}

TEST(Commutativity, PerturbedOperatorFails) {
  auto D1 = macdonald_op(q, 1, 2, 10), D2 = macdonald_op(q, 2, 2, 10);
  D2.terms.at(0) = D2.terms.at(0) + Series<Rational>(std::vector<Rational>{0, Rational(1, 100)}, 10);
  EXPECT_GT(commutator_defect(D1, D2, 10), 1e-4);
}

TEST(Symmetry, TrivialModuleIsSymmetric) {
  EXPECT_LT(std::abs(evaluate_F(0.5, 0, -1.3, -2.2, 12) - std::pow(0.5, -(1.3 * 2.2))), 1e-14);
  EXPECT_LT(symmetry_check(0.5, 0, 5, 12, 1e-12, 42).residual_max, 1e-12);
}

TEST(Symmetry, L2AtFiveSamples) {
  auto rep = symmetry_check(0.5, 2, 5, 12, 1e-6, 42);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.residual_max, 1e-6);
  EXPECT_EQ(rep.samples, 5);
}

TEST(Symmetry, SwapTwiceIsIdentityAndAsymmetricInputFails) {
  Complex a = evaluate_F(0.5, 2, -1.4, -2.6, 12);
  EXPECT_EQ(a, evaluate_F(0.5, 2, -1.4, -2.6, 12));
  // F(λ, μ) against F(μ', λ) with μ' ≠ μ
  EXPECT_GT(std::abs(a - evaluate_F(0.5, 2, -2.5, -1.4, 12)), 1e-3);
}

TEST(Symmetry, RejectsPointsOutsideConvergenceBox) {
  EXPECT_THROW(symmetry_check(2.0, 2, 5, 12, 1e-6, 42), std::invalid_argument);
}
