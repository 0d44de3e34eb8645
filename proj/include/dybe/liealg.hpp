#pragma once

#include "rmatrix.hpp"
#include "verify.hpp"

#include <cmath>
#include <optional>

namespace dybe::liealg {

using CMatrix = Matrix<Complex>;

struct Root {
  int a;
  int b;
  bool positive() const { return a < b; }
};

struct SimpleLieData {
  int n = 2;
  std::vector<CMatrix> cartan;  // orthonormal x_i, i = 1..n−1
  std::vector<Root> roots;      // all (a,b), a≠b; e_α = E_ab
  CMatrix omega;                // Σ x_i⊗x_i + Σ_{a≠b} E_ab⊗E_ba
  std::vector<double> rho;

  CMatrix root_vector(const Root& r) const { return CMatrix::unit(n, r.a, r.b); }
  // diagonal of x_i as a vector in the gl_n coordinates of λ
  std::vector<double> cartan_direction(int i) const {
    std::vector<double> d(n);
    for (int k = 0; k < n; ++k) d[k] = cartan[i](k, k).real();
    return d;
  }
};

inline SimpleLieData sl_data(int n) {
  if (n < 2) throw std::invalid_argument("sl_data: n >= 2");
  SimpleLieData L;
  L.n = n;
  for (int i = 1; i < n; ++i) {
    CMatrix x(n, n);
    double norm = std::sqrt(static_cast<double>(i * (i + 1)));
    for (int k = 0; k < i; ++k) x(k, k) = 1.0 / norm;
    x(i, i) = -static_cast<double>(i) / norm;
    L.cartan.push_back(x);
  }
  L.omega = CMatrix(n * n, n * n);
  for (const auto& x : L.cartan) L.omega += kron(x, x);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b) {
        L.roots.push_back({a, b});
        L.omega += kron(CMatrix::unit(n, a, b), CMatrix::unit(n, b, a));
      }
  for (int a = 0; a < n; ++a) L.rho.push_back((n - 1) / 2.0 - a);
  return L;
}

inline Complex pairing(const Point<Complex>& lambda, const Root& r) { return lambda[r.a] - lambda[r.b]; }

// r = Σ S_ij x_i⊗x_j + Σ_α φ_α e_α⊗e_{−α} (all roots), optionally spectral.
struct ClassicalDynOperator {
  int n = 2;
  bool spectral = false;
  std::function<CMatrix(const Complex& u, const Point<Complex>& lambda)> eval;
  // root-split form, when known
  std::function<CMatrix(const Complex& u, const Point<Complex>& lambda)> cartan_part;
  std::function<Complex(const Root&, const Complex& u, const Point<Complex>& lambda)> phi;
  // analytic ∂r/∂x_i, when known
  std::function<std::vector<CMatrix>(const Complex& u, const Point<Complex>& lambda)> derivative;
  std::vector<PoleHyperplane> poles;
  std::vector<Complex> u_poles;

  bool has_split() const { return static_cast<bool>(cartan_part) && static_cast<bool>(phi); }
  CMatrix operator()(const Point<Complex>& lambda) const { return eval(0.0, lambda); }
};

// Assembles eval from the root-split data.
inline ClassicalDynOperator from_split(int n, bool spectral,
                                       std::function<CMatrix(const Complex&, const Point<Complex>&)> S,
                                       std::function<Complex(const Root&, const Complex&, const Point<Complex>&)> phi) {
  auto L = sl_data(n);
  ClassicalDynOperator r;
  r.n = n;
  r.spectral = spectral;
  r.cartan_part = S;
  r.phi = phi;
  r.eval = [L, S, phi](const Complex& u, const Point<Complex>& l) {
    CMatrix m(L.n * L.n, L.n * L.n);
    CMatrix s = S(u, l);
    for (std::size_t i = 0; i < L.cartan.size(); ++i)
      for (std::size_t j = 0; j < L.cartan.size(); ++j)
        if (s(i, j) != Complex(0.0)) m += s(i, j) * kron(L.cartan[i], L.cartan[j]);
    for (const auto& r : L.roots)
      m += phi(r, u, l) * kron(CMatrix::unit(L.n, r.a, r.b), CMatrix::unit(L.n, r.b, r.a));
    return m;
  };
  return r;
}

inline std::vector<PoleHyperplane> root_poles(int n, const std::vector<double>& offsets) {
  return rmatrix::root_hyperplanes(n, [offsets](int, int) { return offsets; });
}

// Σ_{α>0} e_α∧e_{−α}/(λ,α), with a∧b = a⊗b − b⊗a.
inline ClassicalDynOperator classical_rational(int n) {
  auto r = from_split(
      n, false, [n](const Complex&, const Point<Complex>&) { return CMatrix(n - 1, n - 1); },
      [](const Root& a, const Complex&, const Point<Complex>& l) { return 1.0 / pairing(l, a); });
  auto L = sl_data(n);
  // ∂φ_α/∂x_i = −α(x_i)/(λ,α)²
  r.derivative = [L](const Complex&, const Point<Complex>& l) {
    std::vector<CMatrix> d;
    for (std::size_t i = 0; i < L.cartan.size(); ++i) {
      CMatrix m(L.n * L.n, L.n * L.n);
      for (const auto& a : L.roots) {
        Complex p = pairing(l, a);
        Complex ax = L.cartan[i](a.a, a.a) - L.cartan[i](a.b, a.b);
        m += (-ax / (p * p)) * kron(CMatrix::unit(L.n, a.a, a.b), CMatrix::unit(L.n, a.b, a.a));
      }
      d.push_back(m);
    }
    return d;
  };
  r.poles = root_poles(n, {0.0});
  return r;
}

// Ω/2 + Σ_{α>0} ½coth((λ,α)/2) e_α∧e_{−α}
inline ClassicalDynOperator classical_trig(int n) {
  auto r = from_split(
      n, false,
      [n](const Complex&, const Point<Complex>&) {
        CMatrix s = CMatrix::identity(n - 1);
        return Complex(0.5) * s;
      },
      [](const Root& a, const Complex&, const Point<Complex>& l) {
        Complex x = pairing(l, a) / 2.0;
        return 0.5 * (1.0 + std::cosh(x) / std::sinh(x));
      });
  r.poles = root_poles(n, {0.0});
  return r;
}

// (w'(u)/w(u)) Σ x_i⊗x_i + Σ_α w(u+(λ,α))w'(0)/(w((λ,α))w(u)) e_α⊗e_{−α};
// w = θ for the elliptic family, sin or identity for its degenerations.
inline ClassicalDynOperator classical_wave(int n, specfun::WaveKind kind,
                                           const std::optional<specfun::EllipticParams>& p = std::nullopt) {
  auto w = [kind, p](Complex x) { return specfun::wave(kind, x, p); };
  auto wd = [kind, p](Complex x) { return specfun::wave_d(kind, x, p); };
  Complex wd0 = wd(0.0);
  auto r = from_split(
      n, true,
      [n, w, wd](const Complex& u, const Point<Complex>&) {
        return (wd(u) / w(u)) * CMatrix::identity(n - 1);
      },
      [w, wd0](const Root& a, const Complex& u, const Point<Complex>& l) {
        Complex x = pairing(l, a);
        return w(u + x) * wd0 / (w(x) * w(u));
      });
  if (kind == specfun::WaveKind::elliptic) {
    r.poles = root_poles(n, rmatrix::integer_range(-12, 12));
    r.u_poles = {0.0, 1.0, -1.0};
  } else if (kind == specfun::WaveKind::trig) {
    r.poles = root_poles(n, rmatrix::integer_range(-4, 4, specfun::pi));
    r.u_poles = {0.0, specfun::pi, -specfun::pi};
  } else {
    r.poles = root_poles(n, {0.0});
    r.u_poles = {0.0};
  }
  return r;
}

inline ClassicalDynOperator classical_elliptic(int n, const specfun::EllipticParams& p) {
  return classical_wave(n, specfun::WaveKind::elliptic, p);
}

// ---- derivatives --------------------------------------------------------

enum class Derivative { analytic, fd };

inline double pole_distance(const std::vector<PoleHyperplane>& poles, const Point<Complex>& l) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& h : poles) {
    double dot = 0.0, nn = 0.0;
    for (std::size_t k = 0; k < h.normal.size() && k < l.size(); ++k) {
      dot += h.normal[k] * l[k].real();
      nn += h.normal[k] * h.normal[k];
    }
    d = std::min(d, std::abs(dot - h.offset) / std::sqrt(nn));
  }
  return d;
}

// Central differences along x_i at steps h, h/2, h/4 combined by two rounds
// of Richardson extrapolation (error O(h^6)); h shrinks near declared poles.
inline std::vector<CMatrix> fd_derivative(const ClassicalDynOperator& r, const Complex& u, const Point<Complex>& l,
                                          double h = 2e-3) {
  auto L = sl_data(r.n);
  h = std::min(h, 0.05 * pole_distance(r.poles, l));
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < L.cartan.size(); ++i) {
    auto dir = L.cartan_direction(static_cast<int>(i));
    auto central = [&](double s) {
      Point<Complex> lp = l, lm = l;
      for (int k = 0; k < r.n; ++k) {
        lp[k] += s * dir[k];
        lm[k] -= s * dir[k];
      }
      return Complex(1.0 / (2.0 * s)) * (r.eval(u, lp) - r.eval(u, lm));
    };
    auto d1 = central(h), d2 = central(h / 2), d4 = central(h / 4);
    auto e1 = Complex(4.0 / 3.0) * d2 - Complex(1.0 / 3.0) * d1;
    auto e2 = Complex(4.0 / 3.0) * d4 - Complex(1.0 / 3.0) * d2;
    out.push_back(Complex(16.0 / 15.0) * e2 - Complex(1.0 / 15.0) * e1);
  }
  return out;
}

inline std::vector<CMatrix> derivatives(const ClassicalDynOperator& r, const Complex& u, const Point<Complex>& l,
                                        Derivative mode) {
  if (mode == Derivative::analytic) {
    if (!r.derivative) throw std::invalid_argument("cdybe: no analytic derivative for this r-matrix");
    return r.derivative(u, l);
  }
  return fd_derivative(r, u, l);
}

// ---- CDYBE ---------------------------------------------------------------

namespace detail {

inline CMatrix embed3(const CMatrix& m, std::size_t i, std::size_t j, int n) {
  auto V = WeightVectorSpace::gl_vector(n);
  return embed_with_shift<Complex>([&](const Weight&) { return m; }, i, j, {}, {V, V, V});
}

inline CMatrix on_leg(const CMatrix& x, int leg, int n) {
  auto I = CMatrix::identity(n);
  if (leg == 0) return kron(kron(x, I), I);
  if (leg == 1) return kron(kron(I, x), I);
  return kron(kron(I, I), x);
}

}  // namespace detail

// Σ_i(x_i^(1)∂r^{23} − x_i^(2)∂r^{13} + x_i^(3)∂r^{12}) + [r^{12},r^{13}] + [r^{12},r^{23}] + [r^{13},r^{23}]
inline CMatrix cdybe_defect(const ClassicalDynOperator& r, const std::vector<Complex>& u, const Point<Complex>& l,
                            Derivative mode) {
  int n = r.n;
  auto L = sl_data(n);
  auto uij = [&](int i, int j) { return r.spectral ? u[i] - u[j] : Complex(0.0); };
  auto r12 = detail::embed3(r.eval(uij(0, 1), l), 0, 1, n);
  auto r13 = detail::embed3(r.eval(uij(0, 2), l), 0, 2, n);
  auto r23 = detail::embed3(r.eval(uij(1, 2), l), 1, 2, n);
  auto d12 = derivatives(r, uij(0, 1), l, mode);
  auto d13 = derivatives(r, uij(0, 2), l, mode);
  auto d23 = derivatives(r, uij(1, 2), l, mode);
  CMatrix res = commutator(r12, r13) + commutator(r12, r23) + commutator(r13, r23);
  for (std::size_t i = 0; i < L.cartan.size(); ++i) {
    res += detail::on_leg(L.cartan[i], 0, n) * detail::embed3(d23[i], 1, 2, n);
    res -= detail::on_leg(L.cartan[i], 1, n) * detail::embed3(d13[i], 0, 2, n);
    res += detail::on_leg(L.cartan[i], 2, n) * detail::embed3(d12[i], 0, 1, n);
  }
  return res;
}

inline verify::ResidualReport cdybe_residual(const ClassicalDynOperator& r, int samples, std::uint64_t seed, double tol,
                                             Derivative mode = Derivative::fd, verify::Params params = {}) {
  LambdaSampler sampler(r.n, seed, r.poles, {}, SampleBox{}, 5e-2);
  auto rep = verify::make_report(r.spectral ? "cdybe-spectral" : "cdybe", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) {
    auto l = to_point<Complex>(sampler.next());
    std::vector<Complex> u{0.0, 0.0, 0.0};
    if (r.spectral) u = sample_spectral(sampler.rng(), 3, r.u_poles, 5e-2);
    rep.add(cdybe_defect(r, u, l, mode).sup_norm());
  }
  verify::finish(rep);
  return rep;
}

inline verify::ResidualReport cdybe_spectral_residual(const ClassicalDynOperator& r, int samples, std::uint64_t seed,
                                                      double tol, verify::Params params = {}) {
  if (!r.spectral) throw std::invalid_argument("cdybe_spectral_residual: r has no spectral parameter");
  return cdybe_residual(r, samples, seed, tol, Derivative::fd, std::move(params));
}

// ---- coupling constant and residue ---------------------------------------

struct CouplingCertificate {
  Complex epsilon;
  double defect = 0.0;
  bool certified = false;
};

// Least-squares ε in A(λ) ≈ εΩ over sampled λ.
inline CouplingCertificate fit_to_omega(int n, const std::function<CMatrix(const Point<Complex>&)>& A,
                                        const std::vector<PoleHyperplane>& poles, int samples, std::uint64_t seed,
                                        double threshold = 1e-10) {
  auto L = sl_data(n);
  LambdaSampler sampler(n, seed, poles, {}, SampleBox{}, 1e-2);
  std::vector<CMatrix> values;
  Complex num = 0.0;
  double den = 0.0;
  for (int s = 0; s < samples; ++s) {
    auto m = A(to_point<Complex>(sampler.next()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        num += std::conj(L.omega(i, j)) * m(i, j);
        den += std::norm(L.omega(i, j));
      }
    values.push_back(m);
  }
  CouplingCertificate c;
  c.epsilon = num / den;
  for (const auto& m : values) c.defect = std::max(c.defect, (m - c.epsilon * L.omega).sup_norm());
  c.certified = c.defect < threshold;
  return c;
}

// r + r^{21} = εΩ for non-spectral r.
inline CouplingCertificate coupling_constant(const ClassicalDynOperator& r, int samples = 10, std::uint64_t seed = 42,
                                             double threshold = 1e-10) {
  if (r.spectral) throw std::invalid_argument("coupling_constant: use the spectral variant for spectral r");
  std::size_t n = static_cast<std::size_t>(r.n);
  return fit_to_omega(
      r.n, [&](const Point<Complex>& l) { auto m = r(l); return m + swap_legs(m, n, n); }, r.poles, samples, seed,
      threshold);
}

// r(u,λ) + r^{21}(−u,λ) at fixed u (vanishes for unitary spectral solutions).
inline CouplingCertificate spectral_coupling_constant(const ClassicalDynOperator& r, Complex u, int samples = 10,
                                                      std::uint64_t seed = 42, double threshold = 1e-10) {
  std::size_t n = static_cast<std::size_t>(r.n);
  return fit_to_omega(
      r.n, [&](const Point<Complex>& l) { return r.eval(u, l) + swap_legs(r.eval(-u, l), n, n); }, r.poles, samples,
      seed, threshold);
}

struct ResidueEstimate {
  CMatrix limit;
  double error = 0.0;  // sup-norm distance of the extrapolated limit from Ω
};

// u·r(u,λ) at u1, u2 = u1/2, linearly extrapolated to u = 0.
inline ResidueEstimate residue_at_zero(const ClassicalDynOperator& r, const Point<Complex>& l, double u1 = 1e-3) {
  auto L = sl_data(r.n);
  double u2 = u1 / 2;
  auto f1 = Complex(u1) * r.eval(u1, l);
  auto f2 = Complex(u2) * r.eval(u2, l);
  ResidueEstimate e;
  e.limit = Complex(2.0) * f2 - f1;
  e.error = (e.limit - L.omega).sup_norm();
  return e;
}

// ---- classical limits ----------------------------------------------------

// (π⊗π)M with π(A) = A − tr(A)/n: removes gl_n identity components.
inline CMatrix project_sl(const CMatrix& m, int n) {
  std::size_t N = static_cast<std::size_t>(n);
  CMatrix tr1(N, N), tr2(N, N);
  Complex tr = m.trace();
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b)
      for (std::size_t k = 0; k < N; ++k) {
        tr1(a, b) += m(k * N + a, k * N + b);
        tr2(a, b) += m(a * N + k, b * N + k);
      }
  auto I = CMatrix::identity(N);
  double dn = static_cast<double>(n);
  return m - Complex(1.0 / dn) * kron(I, tr1) - Complex(1.0 / dn) * kron(tr2, I) +
         Complex(1.0 / (dn * dn)) * tr * kron(I, I);
}

enum class LimitFamily { rational, trig, trig_printed, elliptic };

struct LimitResult {
  CMatrix r_estimate;             // projected D(ħ) at the smallest ħ
  CMatrix extrapolated;           // 2D(ħ_last) − D(ħ_prev): removes the O(ħ) term
  double extrapolated_error = 0.0;
  std::vector<double> errors;     // ‖D(ħ) − r‖ per ħ
  std::vector<double> orders;     // log2-type slopes between consecutive ħ
  double order = 0.0;             // smallest slope
  bool exact = false;             // every error at round-off level
  bool converged(double min_order = 0.9) const { return exact || order >= min_order; }
};

// Quantum family member with step ħ, evaluated at λ.
inline CMatrix quantum_member(LimitFamily family, int n, double hbar, const Point<Complex>& lambda, Complex u,
                              const specfun::EllipticParams& p) {
  Point<Complex> scaled;
  for (auto x : lambda) scaled.push_back(x / hbar);
  switch (family) {
    case LimitFamily::rational:
      return rmatrix::basic_rational(n).eval(scaled);
    case LimitFamily::trig:
      return rmatrix::basic_trigonometric(n, Complex(std::exp(hbar))).eval(scaled);
    case LimitFamily::trig_printed:
      return rmatrix::basic_trigonometric(n, Complex(std::exp(-hbar / 2))).eval(scaled);
    case LimitFamily::elliptic:
      return rmatrix::basic_elliptic(n, p, hbar).eval(u, lambda);
  }
  throw std::invalid_argument("unknown limit family");
}

inline LimitResult classical_limit(LimitFamily family, int n, const Point<Complex>& lambda,
                                   const std::vector<double>& hbars, Complex u = Complex(0.37, 0.05),
                                   const specfun::EllipticParams& p = {}) {
  if (hbars.size() < 2) throw std::invalid_argument("classical_limit: need at least two ħ values");
  for (std::size_t k = 1; k < hbars.size(); ++k)
    if (!(hbars[k] < hbars[k - 1])) throw std::invalid_argument("classical_limit: ħ list must decrease");
  CMatrix target;
  switch (family) {
    case LimitFamily::rational:
      target = classical_rational(n)(lambda);
      break;
    case LimitFamily::trig:
    case LimitFamily::trig_printed:
      target = classical_trig(n)(lambda);
      break;
    case LimitFamily::elliptic:
      target = classical_elliptic(n, p).eval(u, lambda);
      break;
  }
  target = project_sl(target, n);
  LimitResult res;
  auto I = CMatrix::identity(static_cast<std::size_t>(n * n));
  CMatrix previous;
  for (double h : hbars) {
    auto R = quantum_member(family, n, h, lambda, u, p);
    for (std::size_t i = 0; i < R.rows(); ++i)
      for (std::size_t j = 0; j < R.cols(); ++j)
        if (!std::isfinite(std::abs(R(i, j)))) throw ResonanceError("classical_limit: pole collision at λ/ħ");
    auto D = project_sl(Complex(1.0 / h) * (I - R), n);
    res.errors.push_back((D - target).sup_norm());
    previous = res.r_estimate;
    res.r_estimate = D;
  }
  double ratio = hbars[hbars.size() - 2] / hbars.back();
  res.extrapolated = Complex(ratio / (ratio - 1)) * res.r_estimate - Complex(1 / (ratio - 1)) * previous;
  res.extrapolated_error = (res.extrapolated - target).sup_norm();
  res.exact = true;
  for (double e : res.errors)
    if (e > 1e-12) res.exact = false;
  res.order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < hbars.size(); ++k) {
    double o = std::log(res.errors[k - 1] / res.errors[k]) / std::log(hbars[k - 1] / hbars[k]);
    res.orders.push_back(o);
    res.order = std::min(res.order, o);
  }
  return res;
}

}  // namespace dybe::liealg
