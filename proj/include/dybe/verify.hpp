#pragma once

#include "sampling.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dybe::verify {

using Params = std::vector<std::pair<std::string, std::string>>;

struct ResidualReport {
  std::string identity;
  int samples = 0;
  std::uint64_t seed = 0;
  double residual_max = 0.0;
  double residual_mean = 0.0;
  double tol = 0.0;
  bool pass = false;
  Params params;

  void add(double r) {
    // NaN must never look like a pass
    if (r != r) r = std::numeric_limits<double>::infinity();
    residual_mean = (residual_mean * samples + r) / (samples + 1);
    residual_max = std::max(residual_max, r);
    ++samples;
    pass = residual_max <= tol;
  }
};

inline ResidualReport make_report(std::string identity, std::uint64_t seed, double tol, Params params = {}) {
  ResidualReport r;
  r.identity = std::move(identity);
  r.seed = seed;
  r.tol = tol;
  r.params = std::move(params);
  r.pass = true;
  return r;
}

inline void finish(ResidualReport& r) {
  if (r.samples < 1) throw ResonanceError(r.identity + ": no usable samples");
  r.pass = r.residual_max <= r.tol;
}

// ---- QDYBE --------------------------------------------------------------

// R^{12}(λ−γh^3)R^{13}(λ)R^{23}(λ−γh^1) − R^{23}(λ)R^{13}(λ−γh^2)R^{12}(λ)
template <class S>
Matrix<S> qdybe_defect(const DynamicalOperator<S>& R, const Point<S>& lambda, const S& gamma) {
  if (!(R.first == R.second)) throw std::invalid_argument("qdybe: R must act on V⊗V");
  std::vector<WeightVectorSpace> sp{R.first, R.first, R.first};
  auto lhs = dynamical_eval(R, lambda, 0, 1, {{2, 1}}, sp, gamma).entries *
             dynamical_eval(R, lambda, 0, 2, {}, sp, gamma).entries *
             dynamical_eval(R, lambda, 1, 2, {{0, 1}}, sp, gamma).entries;
  auto rhs = dynamical_eval(R, lambda, 1, 2, {}, sp, gamma).entries *
             dynamical_eval(R, lambda, 0, 2, {{1, 1}}, sp, gamma).entries *
             dynamical_eval(R, lambda, 0, 1, {}, sp, gamma).entries;
  return lhs - rhs;
}

// Exact or float check at caller-chosen points.
template <class S>
ResidualReport qdybe_residual_at(const DynamicalOperator<S>& R, const S& gamma, const std::vector<Point<S>>& points,
                                 double tol, Params params = {}) {
  auto rep = make_report("qdybe", 0, tol, std::move(params));
  for (const auto& p : points) rep.add(qdybe_defect(R, p, gamma).sup_norm());
  finish(rep);
  return rep;
}

inline ResidualReport qdybe_residual(const DynamicalOperator<Complex>& R, Complex gamma, int samples,
                                     std::uint64_t seed, double tol, Params params = {}) {
  int rank = static_cast<int>(R.first.weights[0].size());
  LambdaSampler sampler(rank, seed, R.poles, weight_offsets({R.first}, gamma.real(), 1));
  auto rep = make_report("qdybe", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) rep.add(qdybe_defect(R, to_point<Complex>(sampler.next()), gamma).sup_norm());
  finish(rep);
  return rep;
}

inline Matrix<Complex> qdybe_spectral_defect(const SpectralDynamicalOperator<Complex>& R, const std::vector<Complex>& u,
                                             const Point<Complex>& lambda, Complex gamma) {
  std::vector<WeightVectorSpace> sp{R.first, R.first, R.first};
  auto at = [&](int i, int j) { return R.at(u[i] - u[j]); };
  auto lhs = dynamical_eval(at(0, 1), lambda, 0, 1, {{2, 1}}, sp, gamma).entries *
             dynamical_eval(at(0, 2), lambda, 0, 2, {}, sp, gamma).entries *
             dynamical_eval(at(1, 2), lambda, 1, 2, {{0, 1}}, sp, gamma).entries;
  auto rhs = dynamical_eval(at(1, 2), lambda, 1, 2, {}, sp, gamma).entries *
             dynamical_eval(at(0, 2), lambda, 0, 2, {{1, 1}}, sp, gamma).entries *
             dynamical_eval(at(0, 1), lambda, 0, 1, {}, sp, gamma).entries;
  return lhs - rhs;
}

inline ResidualReport qdybe_spectral_residual(const SpectralDynamicalOperator<Complex>& R, Complex gamma, int samples,
                                              std::uint64_t seed, double tol, Params params = {}) {
  if (!(R.first == R.second)) throw std::invalid_argument("qdybe: R must act on V⊗V");
  int rank = static_cast<int>(R.first.weights[0].size());
  LambdaSampler sampler(rank, seed, R.poles, weight_offsets({R.first}, gamma.real(), 1));
  auto rep = make_report("qdybe-spectral", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) {
    auto lambda = to_point<Complex>(sampler.next());
    auto u = sample_spectral(sampler.rng(), 3, R.u_poles);
    rep.add(qdybe_spectral_defect(R, u, lambda, gamma).sup_norm());
  }
  finish(rep);
  return rep;
}

// ---- Hecke and unitarity -------------------------------------------------

template <class S>
Matrix<S> hecke_defect(const Matrix<S>& R, std::size_t dim, const S& q) {
  auto PR = flip<S>(dim, dim) * R;
  auto I = Matrix<S>::identity(dim * dim);
  return (PR - I) * (PR + q * I);
}

inline ResidualReport hecke_check(const DynamicalOperator<Complex>& R, Complex q, int samples, std::uint64_t seed,
                                  double tol, Params params = {}) {
  int rank = static_cast<int>(R.first.weights[0].size());
  LambdaSampler sampler(rank, seed, R.poles);
  auto rep = make_report("hecke", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s)
    rep.add(hecke_defect(R.eval(to_point<Complex>(sampler.next())), R.first.dim, q).sup_norm());
  finish(rep);
  return rep;
}

inline ResidualReport unitarity_check(const SpectralDynamicalOperator<Complex>& R, int samples, std::uint64_t seed,
                                      double tol, Params params = {}) {
  int rank = static_cast<int>(R.first.weights[0].size());
  LambdaSampler sampler(rank, seed, R.poles);
  auto rep = make_report("unitarity", seed, tol, std::move(params));
  std::vector<Complex> poles = R.u_poles;
  for (auto p : R.u_poles) poles.push_back(-p);
  std::size_t d1 = R.first.dim, d2 = R.second.dim;
  for (int s = 0; s < samples; ++s) {
    auto lambda = to_point<Complex>(sampler.next());
    // a single u, kept away from ±u-poles
    auto us = sample_spectral(sampler.rng(), 2, poles);
    Complex u = us[0] - us[1];
    auto r = R.eval(u, lambda);
    auto r21 = swap_legs(R.eval(-u, lambda), d2, d1);
    rep.add((r * r21 - Matrix<Complex>::identity(d1 * d2)).sup_norm());
  }
  finish(rep);
  return rep;
}

// ---- representations -----------------------------------------------------

// L ≡ 1 on V⊗C.
inline SpectralDynamicalOperator<Complex> trivial_rep(const WeightVectorSpace& V) {
  auto C = WeightVectorSpace::trivial(static_cast<int>(V.weights[0].size()));
  std::size_t d = V.dim;
  return {V, C, [d](const Complex&, const Point<Complex>&) { return Matrix<Complex>::identity(d); }, 1.0, {}, {}};
}

// Regards a non-spectral operator as u-independent.
inline SpectralDynamicalOperator<Complex> constant_in_u(const DynamicalOperator<Complex>& R) {
  auto f = R.eval;
  return {R.first, R.second, [f](const Complex&, const Point<Complex>& l) { return f(l); }, R.step, R.poles, {}};
}

inline Matrix<Complex> rll_defect(const SpectralDynamicalOperator<Complex>& R, const SpectralDynamicalOperator<Complex>& L,
                                  const std::vector<Complex>& u, const Point<Complex>& lambda, Complex gamma) {
  std::vector<WeightVectorSpace> sp{R.first, R.first, L.second};
  auto Rat = [&](int i, int j) { return R.at(u[i] - u[j]); };
  auto Lat = [&](int i, int j) { return L.at(u[i] - u[j]); };
  auto lhs = dynamical_eval(Rat(0, 1), lambda, 0, 1, {{2, 1}}, sp, gamma).entries *
             dynamical_eval(Lat(0, 2), lambda, 0, 2, {}, sp, gamma).entries *
             dynamical_eval(Lat(1, 2), lambda, 1, 2, {{0, 1}}, sp, gamma).entries;
  auto rhs = dynamical_eval(Lat(1, 2), lambda, 1, 2, {}, sp, gamma).entries *
             dynamical_eval(Lat(0, 2), lambda, 0, 2, {{1, 1}}, sp, gamma).entries *
             dynamical_eval(Rat(0, 1), lambda, 0, 1, {}, sp, gamma).entries;
  return lhs - rhs;
}

inline ResidualReport rll_residual(const SpectralDynamicalOperator<Complex>& R, const SpectralDynamicalOperator<Complex>& L,
                                   Complex gamma, int samples, std::uint64_t seed, double tol, Params params = {}) {
  if (!(L.first == R.first)) throw std::invalid_argument("rll: L must act on V⊗W with V the space of R");
  int rank = static_cast<int>(R.first.weights[0].size());
  auto poles = R.poles;
  poles.insert(poles.end(), L.poles.begin(), L.poles.end());
  auto u_poles = R.u_poles;
  u_poles.insert(u_poles.end(), L.u_poles.begin(), L.u_poles.end());
  LambdaSampler sampler(rank, seed, poles, weight_offsets({R.first, L.second}, gamma.real(), 2));
  auto rep = make_report("rll", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) {
    auto lambda = to_point<Complex>(sampler.next());
    auto u = sample_spectral(sampler.rng(), 3, u_poles);
    rep.add(rll_defect(R, L, u, lambda, gamma).sup_norm());
  }
  finish(rep);
  return rep;
}

// L_{W⊗U}(u,λ) = L_W^{12}(u,λ−γh^3) L_U^{13}(u,λ) on V⊗(W⊗U).
inline SpectralDynamicalOperator<Complex> tensor_rep(const SpectralDynamicalOperator<Complex>& LW,
                                                     const SpectralDynamicalOperator<Complex>& LU, Complex gamma) {
  if (!(LW.first == LU.first)) throw std::invalid_argument("tensor_rep: both must be representations on the same V");
  std::vector<WeightVectorSpace> sp{LW.first, LW.second, LU.second};
  auto eval = [LW, LU, sp, gamma](const Complex& u, const Point<Complex>& l) {
    return dynamical_eval(LW.at(u), l, 0, 1, {{2, 1}}, sp, gamma).entries *
           dynamical_eval(LU.at(u), l, 0, 2, {}, sp, gamma).entries;
  };
  auto poles = LW.poles;
  poles.insert(poles.end(), LU.poles.begin(), LU.poles.end());
  auto u_poles = LW.u_poles;
  u_poles.insert(u_poles.end(), LU.u_poles.begin(), LU.u_poles.end());
  return {LW.first, tensor(LW.second, LU.second), eval, gamma, poles, u_poles};
}

// (1⊗f(λ)) L_W(u,λ) − L_{W'}(u,λ) (1⊗f(λ−γh^1))
inline Matrix<Complex> morphism_defect(const std::function<Matrix<Complex>(const Point<Complex>&)>& f,
                                       const SpectralDynamicalOperator<Complex>& LW,
                                       const SpectralDynamicalOperator<Complex>& LW2, const Complex& u,
                                       const Point<Complex>& lambda, Complex gamma) {
  const auto& V = LW.first;
  std::size_t dw = LW.second.dim, dw2 = LW2.second.dim;
  auto left = kron(Matrix<Complex>::identity(V.dim), f(lambda));
  Matrix<Complex> right(V.dim * dw2, V.dim * dw);
  for (std::size_t a = 0; a < V.dim; ++a) {
    auto fa = f(additive_shift(lambda, V.weights[a], gamma));
    for (std::size_t i = 0; i < dw2; ++i)
      for (std::size_t j = 0; j < dw; ++j) right(a * dw2 + i, a * dw + j) = fa(i, j);
  }
  return left * LW.eval(u, lambda) - LW2.eval(u, lambda) * right;
}

inline ResidualReport morphism_check(const std::function<Matrix<Complex>(const Point<Complex>&)>& f,
                                     const SpectralDynamicalOperator<Complex>& LW,
                                     const SpectralDynamicalOperator<Complex>& LW2, Complex gamma, int samples,
                                     std::uint64_t seed, double tol, Params params = {}) {
  int rank = static_cast<int>(LW.first.weights[0].size());
  LambdaSampler sampler(rank, seed, LW.poles, weight_offsets({LW.first}, gamma.real(), 1));
  auto rep = make_report("morphism", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) {
    auto lambda = to_point<Complex>(sampler.next());
    auto u = sample_spectral(sampler.rng(), 2, LW.u_poles);
    rep.add(morphism_defect(f, LW, LW2, u[0] - u[1], lambda, gamma).sup_norm());
  }
  finish(rep);
  return rep;
}

// Weight defect of an operator at sampled points.
inline ResidualReport weight_defect_check(const DynamicalOperator<Complex>& R, int samples, std::uint64_t seed,
                                          double tol = 0.0, Params params = {}) {
  int rank = static_cast<int>(R.first.weights[0].size());
  LambdaSampler sampler(rank, seed, R.poles);
  auto rep = make_report("weight-defect", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) rep.add(weight_defect(R(to_point<Complex>(sampler.next()))));
  finish(rep);
  return rep;
}

}  // namespace dybe::verify
