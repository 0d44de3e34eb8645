#pragma once

#include "scalar.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace dybe::specfun {

inline constexpr double pi = 3.14159265358979323846;

struct EllipticParams {
  Complex tau{0.0, 0.8};
  double target_tol = 1e-14;

  EllipticParams() = default;
  EllipticParams(Complex t, double tol = 1e-14) : tau(t), target_tol(tol) { validate(); }
  void validate() const {
    if (!(tau.imag() > 0.0)) throw std::invalid_argument("EllipticParams: Im(tau) must be positive");
    if (!(target_tol > 0.0)) throw std::invalid_argument("EllipticParams: target_tol must be positive");
  }
};

// |e^{πi(j²τ+2j(u+1/2))}| = e^{-π(j² Im τ + 2j Im u)}
inline double theta_term_bound(double j, Complex u, const EllipticParams& p) {
  double e1 = -pi * (j * j * p.tau.imag() + 2.0 * j * u.imag());
  double e2 = -pi * (j * j * p.tau.imag() - 2.0 * j * u.imag());
  return std::exp(std::max(e1, e2));
}

// Smallest J >= 8 whose first omitted pair (j = ±(J+1/2)) is below target_tol.
inline int truncation(Complex u, const EllipticParams& p) {
  p.validate();
  int J = 8;
  while (theta_term_bound(J + 0.5, u, p) >= p.target_tol) {
    ++J;
    if (J > 100000) throw std::domain_error("theta: series does not converge fast enough at this u");
  }
  return J;
}

// Symmetric partial sum over j = ±1/2, …, ±(J−1/2).
inline Complex theta_truncated(Complex u, const EllipticParams& p, int J) {
  const Complex i(0.0, 1.0);
  Complex s = 0.0;
  for (int k = J - 1; k >= 0; --k) {
    double j = k + 0.5;
    s += std::exp(pi * i * (j * j * p.tau + 2.0 * j * (u + 0.5)));
    s += std::exp(pi * i * (j * j * p.tau - 2.0 * j * (u + 0.5)));
  }
  return -s;
}

inline Complex theta_d_truncated(Complex u, const EllipticParams& p, int J) {
  const Complex i(0.0, 1.0);
  Complex s = 0.0;
  for (int k = J - 1; k >= 0; --k) {
    double j = k + 0.5;
    s += 2.0 * pi * i * j * std::exp(pi * i * (j * j * p.tau + 2.0 * j * (u + 0.5)));
    s -= 2.0 * pi * i * j * std::exp(pi * i * (j * j * p.tau - 2.0 * j * (u + 0.5)));
  }
  return -s;
}

// θ(u,τ) = −Σ_{j∈Z+1/2} e^{πi(j²τ+2j(u+1/2))}
inline Complex theta(Complex u, const EllipticParams& p) { return theta_truncated(u, p, truncation(u, p)); }

inline Complex theta_d(Complex u, const EllipticParams& p) {
  // the derivative carries an extra factor ~j, so use a few more terms
  return theta_d_truncated(u, p, truncation(u, p) + 2);
}

// Writes u = u0 + kτ with |Im u0| ≤ Im τ/2 and returns (u0, c) with θ(u) = c·θ(u0).
struct StripReduction {
  Complex u0;
  Complex factor;
};

inline StripReduction reduce_to_strip(Complex u, const EllipticParams& p) {
  p.validate();
  const Complex i(0.0, 1.0);
  double k = std::round(u.imag() / p.tau.imag());
  Complex u0 = u - k * p.tau;
  Complex factor = 1.0;
  // θ(v+τ) = −e^{−πiτ−2πiv} θ(v), applied |k| times
  long steps = static_cast<long>(k);
  Complex v = u0;
  for (long s = 0; s < std::labs(steps); ++s) {
    if (steps > 0) {
      factor *= -std::exp(-pi * i * p.tau - 2.0 * pi * i * v);
      v += p.tau;
    } else {
      v -= p.tau;
      factor /= -std::exp(-pi * i * p.tau - 2.0 * pi * i * v);
    }
  }
  return {u0, factor};
}

enum class WaveKind { elliptic, trig, rational };

inline Complex wave(WaveKind kind, Complex u, const std::optional<EllipticParams>& p = std::nullopt) {
  switch (kind) {
    case WaveKind::elliptic:
      if (!p) throw std::invalid_argument("wave: elliptic kind needs EllipticParams");
      return theta(u, *p);
    case WaveKind::trig:
      return std::sin(u);
    case WaveKind::rational:
      return u;
  }
  return 0.0;
}

inline Complex wave_d(WaveKind kind, Complex u, const std::optional<EllipticParams>& p = std::nullopt) {
  switch (kind) {
    case WaveKind::elliptic:
      if (!p) throw std::invalid_argument("wave: elliptic kind needs EllipticParams");
      return theta_d(u, *p);
    case WaveKind::trig:
      return std::cos(u);
    case WaveKind::rational:
      return 1.0;
  }
  return 0.0;
}

}  // namespace dybe::specfun
