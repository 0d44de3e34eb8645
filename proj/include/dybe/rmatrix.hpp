#pragma once

#include "specfun.hpp"
#include "tensorcore.hpp"

#include <cmath>
#include <functional>
#include <optional>

namespace dybe::rmatrix {

// q^x for the two backends: principal branch for floats, integer x only for
// exact rationals.
inline Complex qpow(const Complex& q, const Complex& x) { return std::exp(x * std::log(q)); }

inline Rational qpow(const Rational& q, const Rational& x) {
  if (denominator(x) != 1) throw std::domain_error("exact q-power needs an integer exponent");
  return ipow(q, numerator(x).convert_to<long>());
}

template <class S>
using Coefficient = std::function<S(int a, int b, const S& u, const Point<S>& lambda)>;

// R = Σ_a d_a E_aa⊗E_aa + Σ_{a≠b} α_ab E_aa⊗E_bb + Σ_{a≠b} β_ab E_ab⊗E_ba,
// d_a = 1 unless a gauge supplies `diagonal`. Indices are 0-based.
template <class S>
struct AlphaBetaTable {
  int n = 2;
  bool spectral = false;
  S step = ScalarTraits<S>::one();
  Coefficient<S> alpha;
  Coefficient<S> beta;
  std::function<S(int a, const S& u, const Point<S>& lambda)> diagonal;
  // global scalar in front of the table
  S prefactor = ScalarTraits<S>::one();
  std::vector<PoleHyperplane> poles;
  std::vector<S> u_poles;

  Matrix<S> matrix(const S& u, const Point<S>& lambda) const {
    if (static_cast<int>(lambda.size()) != n) throw std::invalid_argument("dynamical argument has wrong rank");
    std::size_t N = static_cast<std::size_t>(n);
    Matrix<S> r(N * N, N * N);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        std::size_t ab = static_cast<std::size_t>(a) * N + b;
        if (a == b) {
          r(ab, ab) = prefactor * (diagonal ? diagonal(a, u, lambda) : ScalarTraits<S>::one());
          continue;
        }
        r(ab, ab) = prefactor * alpha(a, b, u, lambda);
        // E_ab⊗E_ba sends v_b⊗v_a to v_a⊗v_b
        r(ab, static_cast<std::size_t>(b) * N + a) = prefactor * beta(a, b, u, lambda);
      }
    return r;
  }
};

template <class S>
SpectralDynamicalOperator<S> assemble_spectral(const AlphaBetaTable<S>& t) {
  auto V = WeightVectorSpace::gl_vector(t.n);
  return {V, V, [t](const S& u, const Point<S>& l) { return t.matrix(u, l); }, t.step, t.poles, t.u_poles};
}

template <class S>
DynamicalOperator<S> assemble(const AlphaBetaTable<S>& t) {
  auto V = WeightVectorSpace::gl_vector(t.n);
  return {V, V, [t](const Point<S>& l) { return t.matrix(ScalarTraits<S>::zero(), l); }, t.step, t.poles, {}};
}

// λ_a − λ_b = offset for all a<b (offset may depend on a−b)
inline std::vector<PoleHyperplane> root_hyperplanes(int n, const std::function<std::vector<double>(int, int)>& offsets) {
  std::vector<PoleHyperplane> h;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (double off : offsets(a, b)) {
        std::vector<double> normal(n, 0.0);
        normal[a] = 1.0;
        normal[b] = -1.0;
        h.push_back({normal, off});
      }
  return h;
}

inline std::vector<double> integer_range(int lo, int hi, double scale = 1.0) {
  std::vector<double> r;
  for (int k = lo; k <= hi; ++k) r.push_back(k * scale);
  return r;
}

// β_ab = 1/(λ_b−λ_a), α_ab = 1+β_ab; step 1.
template <class S = Complex>
AlphaBetaTable<S> basic_rational_table(int n) {
  if (n < 2) throw std::invalid_argument("basic_rational: n >= 2");
  AlphaBetaTable<S> t;
  t.n = n;
  t.beta = [](int a, int b, const S&, const Point<S>& l) -> S {
    S d = l[b] - l[a];
    if (ScalarTraits<S>::is_zero(d)) throw ResonanceError("basic_rational: pole λ_a=λ_b");
    return ScalarTraits<S>::one() / d;
  };
  t.alpha = [beta = t.beta](int a, int b, const S& u, const Point<S>& l) -> S {
    return ScalarTraits<S>::one() + beta(a, b, u, l);
  };
  t.poles = root_hyperplanes(n, [](int, int) { return std::vector<double>{0.0}; });
  return t;
}

template <class S = Complex>
DynamicalOperator<S> basic_rational(int n) {
  return assemble(basic_rational_table<S>(n));
}

// β_ab = (q−1)/(q^{λ_b−λ_a}−1), α_ab = q+β_ab; step 1.
template <class S = Complex>
AlphaBetaTable<S> basic_trigonometric_table(int n, const S& q) {
  if (n < 2) throw std::invalid_argument("basic_trigonometric: n >= 2");
  if (ScalarTraits<S>::is_zero(q) || ScalarTraits<S>::is_zero(q - ScalarTraits<S>::one()))
    throw std::invalid_argument("basic_trigonometric: q must differ from 0 and 1 (use basic_rational for q=1)");
  AlphaBetaTable<S> t;
  t.n = n;
  t.beta = [q](int a, int b, const S&, const Point<S>& l) -> S {
    S d = qpow(q, l[b] - l[a]) - ScalarTraits<S>::one();
    if (ScalarTraits<S>::is_zero(d)) throw ResonanceError("basic_trigonometric: pole q^{λ_b−λ_a}=1");
    return (q - ScalarTraits<S>::one()) / d;
  };
  t.alpha = [q, beta = t.beta](int a, int b, const S& u, const Point<S>& l) -> S { return q + beta(a, b, u, l); };
  t.poles = root_hyperplanes(n, [](int, int) { return std::vector<double>{0.0}; });
  return t;
}

template <class S = Complex>
DynamicalOperator<S> basic_trigonometric(int n, const S& q) {
  return assemble(basic_trigonometric_table<S>(n, q));
}

// Spectral table with θ replaced by an arbitrary odd "wave" function:
// β_ab = w(u−λ_b+λ_a)w(γ)/(w(u−γ)w(λ_b−λ_a)), α_ab = w(λ_a−λ_b+γ)w(u)/(w(λ_a−λ_b)w(u−γ)).
inline AlphaBetaTable<Complex> wave_table(int n, Complex gamma, std::function<Complex(Complex)> w) {
  if (n < 2) throw std::invalid_argument("spectral family: n >= 2");
  AlphaBetaTable<Complex> t;
  t.n = n;
  t.spectral = true;
  t.step = gamma;
  Complex wg = w(gamma);
  t.beta = [w, gamma, wg](int a, int b, const Complex& u, const Point<Complex>& l) {
    return w(u - l[b] + l[a]) * wg / (w(u - gamma) * w(l[b] - l[a]));
  };
  t.alpha = [w, gamma](int a, int b, const Complex& u, const Point<Complex>& l) {
    return w(l[a] - l[b] + gamma) * w(u) / (w(l[a] - l[b]) * w(u - gamma));
  };
  return t;
}

inline AlphaBetaTable<Complex> basic_elliptic_table(int n, const specfun::EllipticParams& p, Complex gamma) {
  p.validate();
  if (std::abs(specfun::theta(gamma, p)) < 1e-12) throw std::invalid_argument("basic_elliptic: γ on the θ-zero lattice");
  auto t = wave_table(n, gamma, [p](Complex x) { return specfun::theta(x, p); });
  // real λ: θ(λ_a−λ_b)=0 at integers; u differences stay in (−1,1)
  t.poles = root_hyperplanes(n, [](int, int) { return integer_range(-12, 12); });
  t.u_poles = {gamma, gamma - 1.0, gamma + 1.0};
  return t;
}

inline SpectralDynamicalOperator<Complex> basic_elliptic(int n, const specfun::EllipticParams& p, Complex gamma) {
  return assemble_spectral(basic_elliptic_table(n, p, gamma));
}

inline AlphaBetaTable<Complex> spectral_degenerate_table(specfun::WaveKind kind, int n, Complex gamma) {
  if (kind == specfun::WaveKind::elliptic) throw std::invalid_argument("spectral_degenerate: kind must be trig or rational");
  auto t = wave_table(n, gamma, [kind](Complex x) { return specfun::wave(kind, x); });
  if (kind == specfun::WaveKind::trig) {
    t.poles = root_hyperplanes(n, [](int, int) { return integer_range(-4, 4, specfun::pi); });
    t.u_poles = {gamma, gamma - specfun::pi, gamma + specfun::pi};
  } else {
    t.poles = root_hyperplanes(n, [](int, int) { return std::vector<double>{0.0}; });
    t.u_poles = {gamma};
  }
  return t;
}

inline SpectralDynamicalOperator<Complex> spectral_degenerate(specfun::WaveKind kind, int n, Complex gamma) {
  return assemble_spectral(spectral_degenerate_table(kind, n, gamma));
}

// Exchange operator of the vector representation of U_q(sl_n) in closed form,
// R = q^{1−1/n} R̃. q = 1 gives the classical table (scalar 1).
// `with_scalar = false` returns R̃ alone (exact backends cannot hold q^{1−1/n}).
template <class S = Complex>
AlphaBetaTable<S> exchange_closed_form_table(int n, const S& q, bool with_scalar = true) {
  using T = ScalarTraits<S>;
  if (n < 2) throw std::invalid_argument("exchange_closed_form: n >= 2");
  if (T::is_zero(q)) throw std::invalid_argument("exchange_closed_form: q must be nonzero");
  AlphaBetaTable<S> t;
  t.n = n;
  bool classical = T::is_zero(q - T::one());
  if (classical) {
    t.beta = [](int a, int b, const S&, const Point<S>& l) -> S {
      S d = l[b] - l[a] - T::from_int(b - a);
      if (T::is_zero(d)) throw ResonanceError("exchange_closed_form: pole");
      return T::one() / d;
    };
    t.alpha = [](int a, int b, const S&, const Point<S>& l) -> S {
      if (a < b) return T::one();
      S y = l[b] - l[a] + T::from_int(a - b);
      if (T::is_zero(y)) throw ResonanceError("exchange_closed_form: pole");
      return (y - T::one()) * (y + T::one()) / (y * y);
    };
  } else {
    S q2 = q * q;
    t.beta = [q, q2](int a, int b, const S&, const Point<S>& l) -> S {
      S d = qpow(q, T::from_int(2) * (l[a] - l[b] - T::from_int(a - b))) - T::one();
      if (T::is_zero(d)) throw ResonanceError("exchange_closed_form: pole");
      return (T::one() / q2 - T::one()) / d;
    };
    t.alpha = [q, q2](int a, int b, const S&, const Point<S>& l) -> S {
      if (a < b) return T::one() / q;
      S y = qpow(q, T::from_int(2) * (l[b] - l[a] + T::from_int(a - b)));
      S d = y - T::one();
      if (T::is_zero(d)) throw ResonanceError("exchange_closed_form: pole");
      return (y - T::one() / q2) * (y - q2) / (q * d * d);
    };
    if (with_scalar) {
      if constexpr (T::exact) {
        throw std::domain_error("exchange_closed_form: the scalar q^{1-1/n} is not exact; use with_scalar=false");
      } else {
        t.prefactor = qpow(q, S(1.0 - 1.0 / n));
      }
    }
  }
  t.poles = root_hyperplanes(n, [](int a, int b) { return std::vector<double>{static_cast<double>(a - b)}; });
  return t;
}

template <class S = Complex>
DynamicalOperator<S> exchange_closed_form(int n, const S& q, bool with_scalar = true) {
  return assemble(exchange_closed_form_table<S>(n, q, with_scalar));
}

}  // namespace dybe::rmatrix
