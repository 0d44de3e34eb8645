// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "suites.hpp"

#include <dybe/fusion.hpp>
#include <dybe/gauge.hpp>
#include <dybe/liealg.hpp>
#include <dybe/rmatrix.hpp>
#include <dybe/trace.hpp>
#include <dybe/verify.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

using namespace dybe;

namespace {

constexpr int kSamples = 25;
constexpr std::uint64_t kSeed = 42;
const specfun::EllipticParams kTau{Complex(0.0, 0.8)};
const Complex kGamma = 0.23;
const Rational kHalf(1, 2);

int failures = 0;

struct Line {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what, double value) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << "=" << value << (ok ? "" : " (!)");
  }
  void below(const std::string& what, double value, double tol) { check(value < tol, what, value); }
  void zero(const std::string& what, double value) { check(value == 0.0, what, value); }
  void above(const std::string& what, double value, double floor) { check(value > floor, what, value); }
};

template <class F>
void criterion(int id, const std::string& name, F body) {
  Line line;
  line.detail.precision(3);
  try {
    body(line);
  } catch (const std::exception& e) {
    line.pass = false;
    line.detail << " exception: " << e.what();
  }
  if (!line.pass) ++failures;
  std::printf("%s %2d %s: %s\n", line.pass ? "PASS" : "FAIL", id, name.c_str(), line.detail.str().c_str());
  std::fflush(stdout);
}

// β_01 entry shifted by δ
rmatrix::AlphaBetaTable<Complex> perturb_beta(rmatrix::AlphaBetaTable<Complex> t, Complex delta) {
  auto b = t.beta;
  t.beta = [b, delta](int a, int c, const Complex& u, const Point<Complex>& l) {
    return b(a, c, u, l) + (a == 0 && c == 1 ? delta : Complex(0.0));
  };
  return t;
}

// r + δ·λ_0·E_00⊗E_11
liealg::ClassicalDynOperator perturb_classical(liealg::ClassicalDynOperator r, double delta) {
  auto f = r.eval;
  std::size_t n = static_cast<std::size_t>(r.n);
  r.eval = [f, n, delta](const Complex& u, const Point<Complex>& l) {
    auto m = f(u, l);
    m(0 * n + 1, 0 * n + 1) += delta * (1.0 + l[0]);
    return m;
  };
  r.derivative = nullptr;
  r.cartan_part = nullptr;
  r.phi = nullptr;
  return r;
}

std::vector<Rational> generic_points() {
  return {Rational(3, 7), Rational(-5, 11), Rational(13, 5), Rational(2, 9), Rational(-7, 3)};
}

std::vector<Rational> generic_X() {
  return {Rational(3), Rational(5, 7), Rational(-2), Rational(7, 11), Rational(13, 3)};
}

using Alg = fusion::RankOneAlgebra<Rational>;

std::vector<std::pair<std::string, Alg>> both_cases() {
  return {{"classical", Alg::classical_case()}, {"q=1/2", Alg::quantum(kHalf)}};
}

std::vector<Rational> points_for(const Alg& alg) { return alg.classical ? generic_points() : generic_X(); }

std::string json_of(const std::string& suite, std::uint64_t seed, cli::SuiteConfig cfg = {}) {
  cfg.suite = suite;
  cfg.seed = seed;
  return cli::to_json(cli::run_suite(cfg)).dump();
}

}  // namespace

int main() {
  criterion(1, "QDYBE basic rational and trigonometric", [](Line& L) {
    for (int n : {2, 3}) {
      L.below("rational n=" + std::to_string(n),
              verify::qdybe_residual(rmatrix::basic_rational(n), 1.0, kSamples, kSeed, 1e-10).residual_max, 1e-10);
      L.below("trig n=" + std::to_string(n),
              verify::qdybe_residual(rmatrix::basic_trigonometric(n, Complex(0.5)), 1.0, kSamples, kSeed, 1e-10)
                  .residual_max,
              1e-10);
    }
  });

  criterion(2, "spectral QDYBE elliptic and degenerations", [](Line& L) {
    for (int n : {2, 3}) {
      auto s = std::to_string(n);
      L.below("elliptic n=" + s,
              verify::qdybe_spectral_residual(rmatrix::basic_elliptic(n, kTau, kGamma), kGamma, kSamples, kSeed, 1e-8)
                  .residual_max,
              1e-8);
      for (auto [kind, name] : {std::pair{specfun::WaveKind::trig, "spectral-trig"},
                                std::pair{specfun::WaveKind::rational, "spectral-rational"}})
        L.below(std::string(name) + " n=" + s,
                verify::qdybe_spectral_residual(rmatrix::spectral_degenerate(kind, n, kGamma), kGamma, kSamples, kSeed,
                                                1e-10)
                    .residual_max,
                1e-10);
    }
  });

  criterion(3, "Hecke condition and unitarity", [](Line& L) {
    for (int n : {2, 3}) {
      auto s = std::to_string(n);
      L.below("hecke rational n=" + s,
              verify::hecke_check(rmatrix::basic_rational(n), 1.0, kSamples, kSeed, 1e-9).residual_max, 1e-9);
      L.below("hecke trig n=" + s,
              verify::hecke_check(rmatrix::basic_trigonometric(n, Complex(0.5)), 0.5, kSamples, kSeed, 1e-9).residual_max,
              1e-9);
      L.below("unitarity elliptic n=" + s,
              verify::unitarity_check(rmatrix::basic_elliptic(n, kTau, kGamma), kSamples, kSeed, 1e-8).residual_max,
              1e-8);
    }
  });

  criterion(4, "gauge preservation and non-closed control", [](Line& L) {
    gauge::QuantumGaugePlan plan;
    std::vector<gauge::ScalarField> xi;
    for (int a = 0; a < 3; ++a)
      xi.push_back([a](const Point<Complex>& l) { return std::exp(0.3 * l[a] * l[(a + 1) % 3] - 0.2 * l[a]); });
    plan.form = gauge::exact_from_potential(xi, 1.0);
    plan.shift = {0.4, -0.2, 1.1};
    plan.scalar = [](const Complex&) { return Complex(-2.0); };
    auto R = rmatrix::assemble(gauge::apply_quantum(rmatrix::basic_rational_table(3), plan, 1.0));
    L.below("exact form", verify::qdybe_residual(R, 1.0, kSamples, kSeed, 1e-9).residual_max, 1e-9);
    gauge::QuantumGaugePlan bad;
    bad.form = cli::detail::named_form("cyclic", 3);
    auto Rb = rmatrix::assemble(gauge::apply_quantum(rmatrix::basic_rational_table(3), bad, 1.0));
    L.above("non-closed form", verify::qdybe_residual(Rb, 1.0, kSamples, kSeed, 1e-9).residual_max, 1e-3);
  });

  criterion(5, "CDYBE rational, trigonometric, elliptic", [](Line& L) {
    for (int n : {2, 3}) {
      auto s = std::to_string(n);
      L.below("c-rational n=" + s, liealg::cdybe_residual(liealg::classical_rational(n), kSamples, kSeed, 1e-7).residual_max,
              1e-7);
      L.below("c-trig n=" + s, liealg::cdybe_residual(liealg::classical_trig(n), kSamples, kSeed, 1e-7).residual_max, 1e-7);
    }
    L.below("c-elliptic n=2",
            liealg::cdybe_spectral_residual(liealg::classical_elliptic(2, kTau), kSamples, kSeed, 1e-6).residual_max, 1e-6);
  });

  criterion(6, "coupling constants and elliptic residue", [](Line& L) {
    for (int n : {2, 3}) {
      auto s = std::to_string(n);
      auto c0 = liealg::coupling_constant(liealg::classical_rational(n));
      L.below("rational defect n=" + s, c0.defect, 1e-10);
      L.below("|eps-0| n=" + s, std::abs(c0.epsilon), 1e-10);
      auto c1 = liealg::coupling_constant(liealg::classical_trig(n));
      L.below("trig defect n=" + s, c1.defect, 1e-10);
      L.below("|eps-1| n=" + s, std::abs(c1.epsilon - 1.0), 1e-10);
    }
    auto r = liealg::classical_elliptic(2, kTau);
    double worst = 0;
    LambdaSampler sampler(2, kSeed, r.poles, {}, SampleBox{}, 5e-2);
    for (int s = 0; s < 5; ++s) worst = std::max(worst, liealg::residue_at_zero(r, to_point<Complex>(sampler.next())).error);
    L.below("residue", worst, 1e-5);
  });

  criterion(7, "classical limits with order >= 0.9", [](Line& L) {
    std::vector<double> hb{1e-2, 5e-3, 2.5e-3};
    Point<Complex> l{1.3, -0.4};
    auto rat = liealg::classical_limit(liealg::LimitFamily::rational, 2, l, hb);
    // rational: error at round-off for every ħ, order undefined
    L.check(rat.converged(0.9), "rational max error", *std::max_element(rat.errors.begin(), rat.errors.end()));
    auto trig = liealg::classical_limit(liealg::LimitFamily::trig, 2, l, hb);
    L.check(trig.converged(0.9), "trig order", trig.order);
    auto ell = liealg::classical_limit(liealg::LimitFamily::elliptic, 2, l, hb, Complex(0.37, 0.05), kTau);
    L.check(ell.converged(0.9), "elliptic order", ell.order);
    for (std::size_t k = 1; k < hb.size(); ++k) {
      L.check(trig.errors[k] < trig.errors[k - 1], "trig decreasing", trig.errors[k]);
      L.check(ell.errors[k] < ell.errors[k - 1], "elliptic decreasing", ell.errors[k]);
    }
  });

  criterion(8, "ABRR equation exact; closed form matches", [](Line& L) {
    for (auto [name, alg] : both_cases())
      for (int m : {1, 2}) {
        auto V = fusion::fd_module(alg, m);
        double d = 0;
        for (const auto& z : points_for(alg))
          d = std::max(d, fusion::abrr_defect(alg, V, V, z, fusion::abrr_solve(alg, V, V, z)).sup_norm());
        L.zero(name + " L" + std::to_string(m) + "xL" + std::to_string(m), d);
      }
    auto cl = Alg::classical_case();
    double d = 0;
    for (int m1 : {1, 2})
      for (int m2 : {1, 2}) {
        auto W = fusion::fd_module(cl, m1), V = fusion::fd_module(cl, m2);
        for (const auto& z : generic_points())
          d = std::max(d, (fusion::closed_form_J(z).eval(W, V) - fusion::abrr_solve(cl, W, V, z)).sup_norm());
      }
    L.zero("closed form vs ABRR", d);
  });

  criterion(9, "fusion cross-oracle intertwiners = ABRR", [](Line& L) {
    for (auto [name, alg] : both_cases()) {
      double d = 0;
      for (auto [a, b] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
        auto W = fusion::fd_module(alg, a), V = fusion::fd_module(alg, b);
        for (const auto& z : points_for(alg))
          d = std::max(d, (fusion::fusion_via_intertwiners(alg, W, V, z) - fusion::abrr_solve(alg, W, V, z)).sup_norm());
      }
      L.zero(name, d);
    }
  });

  criterion(10, "exchange QDYBE exact; closed form n=2 dictionary", [](Line& L) {
    for (auto [name, alg] : both_cases()) {
      std::vector<Point<Rational>> pts;
      for (const auto& z : points_for(alg)) pts.push_back({z});
      auto op = fusion::exchange_operator(alg, fusion::fd_module(alg, 1));
      L.zero("QDYBE " + name, verify::qdybe_residual_at(op, Rational(1), pts, 0.0).residual_max);
    }
    // l = λ1 − λ2; quantum X = q^{2l} with the global scalar q^{1/2} carried as half = 1
    auto cl = Alg::classical_case();
    double d = 0;
    for (const auto& l : generic_points()) {
      auto R = fusion::exchange(cl, fusion::fd_module(cl, 1), fusion::fd_module(cl, 1), l).matrix;
      auto C = rmatrix::exchange_closed_form<Rational>(2, Rational(1)).eval(Point<Rational>{l, Rational(0)});
      d = std::max(d, (R - C).sup_norm());
    }
    L.zero("dictionary classical", d);
    auto qa = Alg::quantum(kHalf);
    d = 0;
    bool half_ok = true;
    for (int l : {2, 3, 5, -3, -4}) {
      auto R = fusion::exchange(qa, fusion::fd_module(qa, 1), fusion::fd_module(qa, 1), ipow(kHalf, 2 * l));
      half_ok = half_ok && R.half == 1;
      auto C = rmatrix::exchange_closed_form<Rational>(2, kHalf, false).eval(Point<Rational>{Rational(l), Rational(0)});
      d = std::max(d, (R.matrix - C).sup_norm());
    }
    L.zero("dictionary q=1/2", d);
    L.check(half_ok, "scalar exponent q^{1/2}", half_ok ? 1 : 0);
  });

  criterion(11, "dynamical twist equation exact", [](Line& L) {
    for (auto [name, alg] : both_cases()) {
      auto V1 = fusion::fd_module(alg, 1), V2 = fusion::fd_module(alg, 2);
      L.zero(name + " (L1,L1,L1)", fusion::twist_residual(alg, V1, V1, V1, points_for(alg)).residual_max);
      L.zero(name + " (L1,L1,L2)", fusion::twist_residual(alg, V1, V1, V2, points_for(alg)).residual_max);
    }
    // float backend: zero up to round-off
    for (bool classical : {true, false}) {
      auto alg = classical ? fusion::RankOneAlgebra<Complex>::classical_case() : fusion::RankOneAlgebra<Complex>::quantum(0.5);
      std::vector<Complex> pts;
      for (const auto& z : classical ? generic_points() : generic_X()) pts.push_back(static_cast<double>(z));
      auto V1 = fusion::fd_module(alg, 1), V2 = fusion::fd_module(alg, 2);
      double d = std::max(fusion::twist_residual(alg, V1, V1, V1, pts).residual_max,
                          fusion::twist_residual(alg, V1, V1, V2, pts).residual_max);
      L.below(std::string("float ") + (classical ? "classical" : "q=0.5"), d, 1e-12);
    }
  });

  criterion(12, "difference operators commute; D_{L1xL1} = D_{L1}^2", [](Line& L) {
    L.zero("[D_L1,D_L2]", trace::commutativity_check(kHalf, 1, 2, 2, 10).residual_max);
    L.zero("D_L1xL1 - D_L1^2", trace::tensor_product_defect(kHalf, 1, 1, 2, 10));
  });

  criterion(13, "Macdonald-type eigenvalue equation exact", [](Line& L) {
    std::vector<Rational> mus{Rational(3, 5), Rational(7, 4), Rational(2, 9)};
    L.zero("(L0,L1) N=24", trace::eigen_check(kHalf, 0, 1, mus, 24).residual_max);
    L.zero("(L2,L1) N=10", trace::eigen_check(kHalf, 2, 1, mus, 10).residual_max);
    L.zero("(L2,L2) N=10", trace::eigen_check(kHalf, 2, 2, mus, 10).residual_max);
  });

  criterion(14, "trace function symmetry", [](Line& L) {
    auto rep = trace::symmetry_check(0.5, 2, 5, 12, 1e-6, kSeed);
    L.check(rep.pass && rep.samples == 5, "pass with tail bound", rep.tol);
    L.below("residual", rep.residual_max, 1e-6);
  });

  criterion(15, "negative controls and determinism", [](Line& L) {
    auto rat = rmatrix::basic_rational_table(3);
    auto ell = rmatrix::basic_elliptic_table(2, kTau, kGamma);
    L.above("qdybe", verify::qdybe_residual(rmatrix::assemble(perturb_beta(rat, 0.1)), 1.0, kSamples, kSeed, 1e-10).residual_max,
            1e3 * 1e-10);
    L.above("qdybe-spectral",
            verify::qdybe_spectral_residual(rmatrix::assemble_spectral(perturb_beta(ell, 0.1)), kGamma, kSamples, kSeed, 1e-8)
                .residual_max,
            1e3 * 1e-8);
    L.above("hecke", verify::hecke_check(rmatrix::assemble(perturb_beta(rat, 0.1)), 1.0, kSamples, kSeed, 1e-9).residual_max,
            1e3 * 1e-9);
    L.above("unitarity",
            verify::unitarity_check(rmatrix::assemble_spectral(perturb_beta(ell, 0.1)), kSamples, kSeed, 1e-8).residual_max,
            1e3 * 1e-8);
    auto R = rmatrix::assemble_spectral(ell);
    L.above("rll",
            verify::rll_residual(R, rmatrix::assemble_spectral(perturb_beta(ell, 0.1)), kGamma, 5, kSeed, 1e-8).residual_max,
            1e3 * 1e-8);
    L.above("cdybe", liealg::cdybe_residual(perturb_classical(liealg::classical_rational(3), 0.1), kSamples, kSeed, 1e-7).residual_max,
            1e3 * 1e-7);
    L.above("coupling", liealg::coupling_constant(perturb_classical(liealg::classical_trig(3), 0.1)).defect, 1e3 * 1e-10);
    {
      auto r = liealg::classical_elliptic(2, kTau);
      auto f = r.eval;
      r.eval = [f](const Complex& u, const Point<Complex>& l) { return Complex(1.05) * f(u, l); };
      L.above("residue", liealg::residue_at_zero(r, {0.83, -0.4}).error, 1e3 * 1e-5);
    }
    L.above("closed-form", gauge::is_closed(cli::detail::named_form("cyclic", 3), 1.0, 10, kSeed).residual_max, 1e3 * 1e-12);
    {
      auto res = liealg::classical_limit(liealg::LimitFamily::trig_printed, 2, {1.3, -0.4}, {1e-2, 5e-3, 2.5e-3});
      L.check(!res.converged(0.9), "limit (printed trig parametrization) order", res.order);
    }
    auto qa = Alg::quantum(kHalf);
    auto V1 = fusion::fd_module(qa, 1);
    Rational z(5, 3);
    auto J = fusion::abrr_solve(qa, V1, V1, z);
    J(2, 1) += Rational(1, 1000);
    L.above("abrr", fusion::abrr_defect(qa, V1, V1, z, J).sup_norm(), 0.0);
    L.above("cross-oracle", (fusion::fusion_via_intertwiners(qa, V1, V1, z) - J).sup_norm(), 0.0);
    {
      auto cl = Alg::classical_case();
      auto V = fusion::fd_module(cl, 1);
      Rational w(5, 2);
      auto I2 = Matrix<Rational>::identity(2);
      auto lhs = fusion::fusion_J(cl, fusion::tensor_module(V, V), V, w) * kron(fusion::fusion_J(cl, V, V, w), I2);
      auto rhs = fusion::fusion_J(cl, V, fusion::tensor_module(V, V), w) * kron(I2, fusion::fusion_J(cl, V, V, w));
      L.above("twist without dynamical shift", (lhs - rhs).sup_norm(), 0.0);
    }
    {
      auto op = fusion::exchange_operator(qa, V1);
      auto f = op.eval;
      op.eval = [f](const Point<Rational>& p) {
        auto m = f(p);
        m(1, 2) += Rational(1, 100);
        return m;
      };
      std::vector<Point<Rational>> pts;
      for (const auto& x : generic_X()) pts.push_back({x});
      L.above("exchange", verify::qdybe_residual_at(op, Rational(1), pts, 0.0).residual_max, 0.0);
    }
    L.above("eigen (Weyl denominator dropped)",
            trace::eigen_check(kHalf, 2, 1, {Rational(3, 5)}, 10, 0.0, true).residual_max, 0.0);
    {
      auto D1 = trace::macdonald_op(kHalf, 1, 2, 10), D2 = trace::macdonald_op(kHalf, 2, 2, 10);
      D2.terms.at(0) = D2.terms.at(0) + Series<Rational>(std::vector<Rational>{0, Rational(1, 100)}, 10);
      L.above("commute", trace::commutator_defect(D1, D2, 10), 0.0);
    }
    L.above("symmetry (mismatched arguments)",
            std::abs(trace::evaluate_F(0.5, 2, -1.4, -2.6, 12) - trace::evaluate_F(0.5, 2, -2.5, -1.4, 12)), 1e3 * 1e-6);

    bool same = true, differs = true;
    for (const char* s : {"qdybe", "qdybe-spectral", "hecke", "unitarity", "cdybe", "gauge", "symmetry"}) {
      cli::SuiteConfig cfg;
      if (std::string(s) == "gauge") cfg.params = {{"plan", "{\"family\":\"trig\",\"n\":3,\"shift\":[0.1,0.2,0.3]}"}};
      same = same && json_of(s, kSeed, cfg) == json_of(s, kSeed, cfg);
      differs = differs && json_of(s, kSeed, cfg) != json_of(s, kSeed + 1, cfg);
    }
    for (const char* s : {"limit", "abrr", "twist", "exchange", "cross-oracle", "eigen", "commute"})
      same = same && json_of(s, kSeed) == json_of(s, kSeed);
    L.check(same, "identical reports for identical seeds", same ? 1 : 0);
    L.check(differs, "sampled reports change with the seed", differs ? 1 : 0);
  });

  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
