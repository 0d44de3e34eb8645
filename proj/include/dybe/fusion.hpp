#pragma once

#include "tensorcore.hpp"
#include "verify.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

// Rank-1 (sl2 / U_q(sl2)) fusion engine.
//
// Dynamical coordinate z: classical z = l; quantum z = X = q^{2l}.  Every
// quantity below (fusion operators, exchange operators, Q) is a rational
// function of z, which keeps the exact backend exact for rational q and X.
namespace dybe::fusion {

template <class S>
struct RankOneAlgebra {
  using T = ScalarTraits<S>;
  bool classical = true;
  S q = T::one();

  static RankOneAlgebra classical_case() { return {true, T::one()}; }
  static RankOneAlgebra quantum(const S& q) {
    if (T::is_zero(q)) throw std::domain_error("q must be nonzero");
    if (T::is_zero(q * q - T::one())) throw std::domain_error("q must not be ±1 in the quantum case");
    return {false, q};
  }

  S qpow(long n) const { return classical ? T::one() : ipow(q, n); }
  // [n]
  S qint(long n) const {
    if (classical) return T::from_int(n);
    return (ipow(q, n) - ipow(q, -n)) / (q - T::one() / q);
  }
  S qfactorial(long n) const {
    S r = T::one();
    for (long k = 1; k <= n; ++k) r = r * qint(k);
    return r;
  }
  // l → l + s
  S shift(const S& z, long s) const { return classical ? z + T::from_int(s) : z * ipow(q, 2 * s); }
  // classical l + c; quantum q^l·[l + c] = (X q^c − q^{−c})/(q − q⁻¹)
  S bracket(const S& z, long c) const {
    if (classical) return z + T::from_int(c);
    return (z * ipow(q, c) - ipow(q, -c)) / (q - T::one() / q);
  }
  std::string describe() const { return classical ? "classical" : "quantum"; }
};

template <class S>
struct Module {
  WeightVectorSpace space;
  std::vector<int> h;
  Matrix<S> e, f, K, Kinv;

  std::size_t dim() const { return h.size(); }
};

template <class S>
Matrix<S> diagonal(const std::vector<S>& d) {
  Matrix<S> m(d.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = d[k];
  return m;
}

template <class S>
Matrix<S> matrix_power(const Matrix<S>& a, int n) {
  Matrix<S> r = Matrix<S>::identity(a.rows());
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

// L_m: v_j of weight m−2j, e v_j = [m−j+1] v_{j−1}, f v_j = [j+1] v_{j+1}, K = q^h.
template <class S>
Module<S> fd_module(const RankOneAlgebra<S>& alg, int m) {
  if (m < 0) throw std::invalid_argument("fd_module: highest weight must be nonnegative");
  for (int k = 1; k <= m + 1; ++k)
    if (ScalarTraits<S>::is_zero(alg.qint(k))) throw std::domain_error("fd_module: q is a root of unity of small order");
  Module<S> M;
  M.space = WeightVectorSpace::rank_one(m);
  std::size_t d = static_cast<std::size_t>(m) + 1;
  M.e = Matrix<S>(d, d);
  M.f = Matrix<S>(d, d);
  M.K = Matrix<S>(d, d);
  M.Kinv = Matrix<S>(d, d);
  for (int j = 0; j <= m; ++j) {
    M.h.push_back(m - 2 * j);
    M.K(j, j) = alg.qpow(m - 2 * j);
    M.Kinv(j, j) = alg.qpow(2 * j - m);
    if (j > 0) M.e(j - 1, j) = alg.qint(m - j + 1);
    if (j < m) M.f(j + 1, j) = alg.qint(j + 1);
  }
  return M;
}

// Δe = e⊗K + 1⊗e, Δf = f⊗1 + K⁻¹⊗f, ΔK = K⊗K.
template <class S>
Module<S> tensor_module(const Module<S>& a, const Module<S>& b) {
  Module<S> M;
  M.space = tensor(a.space, b.space);
  for (int x : a.h)
    for (int y : b.h) M.h.push_back(x + y);
  auto Ia = Matrix<S>::identity(a.dim());
  auto Ib = Matrix<S>::identity(b.dim());
  M.e = kron(a.e, b.K) + kron(Ia, b.e);
  M.f = kron(a.f, Ib) + kron(a.Kinv, b.f);
  M.K = kron(a.K, b.K);
  M.Kinv = kron(a.Kinv, b.Kinv);
  return M;
}

// Largest violation of the defining relations on M.
template <class S>
double relation_defect(const RankOneAlgebra<S>& alg, const Module<S>& M) {
  using T = ScalarTraits<S>;
  std::vector<S> hs;
  for (int x : M.h) hs.push_back(T::from_int(x));
  auto H = diagonal(hs);
  double d = 0;
  if (alg.classical) {
    d = std::max(d, (commutator(H, M.e) - T::from_int(2) * M.e).sup_norm());
    d = std::max(d, (commutator(H, M.f) + T::from_int(2) * M.f).sup_norm());
    d = std::max(d, (commutator(M.e, M.f) - H).sup_norm());
  } else {
    S q2 = alg.q * alg.q;
    d = std::max(d, (M.K * M.e * M.Kinv - q2 * M.e).sup_norm());
    d = std::max(d, (M.K * M.f * M.Kinv - (T::one() / q2) * M.f).sup_norm());
    d = std::max(d, (commutator(M.e, M.f) - (T::one() / (alg.q - T::one() / alg.q)) * (M.K - M.Kinv)).sup_norm());
    d = std::max(d, (M.K * M.Kinv - Matrix<S>::identity(M.dim())).sup_norm());
  }
  return d;
}

// Value = q^{half/2}·matrix; half ∈ {0, 1} carries the non-rational part of q^{h⊗h/2}.
template <class S>
struct HalfScaled {
  int half = 0;
  Matrix<S> matrix;
};

// q^{h⊗h/2} Σ_n (q−q⁻¹)^n q^{n(n−1)/2}/[n]! e^n⊗f^n on W⊗V.
template <class S>
HalfScaled<S> universal_R(const RankOneAlgebra<S>& alg, const Module<S>& W, const Module<S>& V) {
  if (alg.classical) throw std::domain_error("universal R-matrix needs q ≠ 1");
  using T = ScalarTraits<S>;
  std::size_t d = W.dim() * V.dim();
  Matrix<S> sum(d, d);
  S c = T::one();
  S qq = alg.q - T::one() / alg.q;
  int nmax = static_cast<int>(std::min(W.dim(), V.dim()));
  for (int n = 0; n < nmax; ++n) {
    if (n > 0) c = c * qq * ipow(alg.q, n - 1) / alg.qint(n);
    sum = sum + c * kron(matrix_power(W.e, n), matrix_power(V.f, n));
  }
  int half = std::abs(W.h[0] * V.h[0]) % 2;
  HalfScaled<S> r{half, Matrix<S>(d, d)};
  for (std::size_t a = 0; a < W.dim(); ++a)
    for (std::size_t b = 0; b < V.dim(); ++b) {
      std::size_t i = a * V.dim() + b;
      S s = ipow(alg.q, (W.h[a] * V.h[b] - half) / 2);
      for (std::size_t j = 0; j < d; ++j) r.matrix(i, j) = s * sum(i, j);
    }
  return r;
}

// R0 = R q^{−h⊗h/2}; unipotent.
template <class S>
Matrix<S> r0_eval(const RankOneAlgebra<S>& alg, const Module<S>& W, const Module<S>& V) {
  auto R = universal_R(alg, W, V);
  std::size_t d = W.dim() * V.dim();
  std::vector<int> hh(d);
  for (std::size_t a = 0; a < W.dim(); ++a)
    for (std::size_t b = 0; b < V.dim(); ++b) hh[a * V.dim() + b] = W.h[a] * V.h[b];
  Matrix<S> r(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (ScalarTraits<S>::is_zero(R.matrix(i, j))) continue;
      r(i, j) = R.matrix(i, j) * ipow(alg.q, (R.half - hh[j]) / 2);
    }
  return r;
}

// Second-leg weight of basis index i of W⊗V.
template <class S>
int second_weight(const Module<S>& V, std::size_t i) {
  return V.h[i % V.dim()];
}

// Θ-data on the second leg: classical Θ(m) = l·m/2 + m/2 − m²/4, quantum
// q^{2Θ(m)} relative to the lowest weight m0 of V (a polynomial in X).
template <class S>
S theta_value(const RankOneAlgebra<S>& alg, const S& z, int m, int m0) {
  using T = ScalarTraits<S>;
  if (alg.classical) return z * T::from_int(m) / T::from_int(2) + T::from_int(2 * m - m * m) / T::from_int(4);
  return ipow(z, (m - m0) / 2) * ipow(alg.q, (m - m0) - (m * m - m0 * m0) / 2);
}

// Unique lower-triangular zero-weight J with J_0 = 1 solving
//   quantum   J (1⊗q^{2Θ}) = R0^{21} (1⊗q^{2Θ}) J
//   classical J Θ − Θ J = (f⊗e) J
// by recursion in the second-leg weight.
template <class S>
Matrix<S> abrr_solve(const RankOneAlgebra<S>& alg, const Module<S>& W, const Module<S>& V, const S& z) {
  using T = ScalarTraits<S>;
  std::size_t d = W.dim() * V.dim();
  Matrix<S> U = alg.classical ? kron(W.f, V.e) : swap_legs(r0_eval(alg, V, W), V.dim(), W.dim()) - Matrix<S>::identity(d);
  int m0 = *std::min_element(V.h.begin(), V.h.end());
  std::vector<S> theta(d);
  std::vector<int> total(d);
  for (std::size_t i = 0; i < d; ++i) {
    theta[i] = theta_value(alg, z, second_weight(V, i), m0);
    total[i] = W.h[i / V.dim()] + second_weight(V, i);
  }
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return second_weight(V, a) < second_weight(V, b); });
  Matrix<S> J(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    J(j, j) = T::one();
    for (std::size_t i : order) {
      if (i == j || total[i] != total[j] || second_weight(V, i) <= second_weight(V, j)) continue;
      S rhs = T::zero();
      for (std::size_t k = 0; k < d; ++k) {
        if (T::is_zero(U(i, k)) || T::is_zero(J(k, j))) continue;
        rhs = rhs + (alg.classical ? U(i, k) * J(k, j) : U(i, k) * theta[k] * J(k, j));
      }
      if (T::is_zero(rhs)) continue;
      S den = theta[j] - theta[i];
      if (T::is_zero(den))
        throw ResonanceError("abrr: Θ eigenvalues coincide for second-leg weights " + std::to_string(second_weight(V, j)) +
                             " and " + std::to_string(second_weight(V, i)));
      J(i, j) = rhs / den;
    }
  }
  return J;
}

// Left side minus right side of the ABRR equation.
template <class S>
Matrix<S> abrr_defect(const RankOneAlgebra<S>& alg, const Module<S>& W, const Module<S>& V, const S& z,
                      const Matrix<S>& J) {
  std::size_t d = W.dim() * V.dim();
  int m0 = *std::min_element(V.h.begin(), V.h.end());
  std::vector<S> theta(d);
  for (std::size_t i = 0; i < d; ++i) theta[i] = theta_value(alg, z, second_weight(V, i), m0);
  auto D = diagonal(theta);
  if (alg.classical) return J * D - D * J - kron(W.f, V.e) * J;
  auto R021 = swap_legs(r0_eval(alg, V, W), V.dim(), W.dim());
  return J * D - R021 * D * J;
}

template <class S>
bool row_is_zero(const Matrix<S>& m, std::size_t i) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!ScalarTraits<S>::is_zero(m(i, j))) return false;
  return true;
}

// J = Σ_n f^n K^n ⊗ B_n(h) e^n, with B_n evaluated at the weight after e^n
// (classical: no K^n).
template <class S>
struct TriangularSeries {
  RankOneAlgebra<S> alg;
  std::function<S(int n, int h)> B;

  Matrix<S> eval(const Module<S>& W, const Module<S>& V) const {
    std::size_t d = W.dim() * V.dim();
    Matrix<S> J(d, d);
    auto fn = Matrix<S>::identity(W.dim());
    auto Kn = Matrix<S>::identity(W.dim());
    auto en = Matrix<S>::identity(V.dim());
    for (std::size_t n = 0; n < V.dim(); ++n) {
      std::vector<S> b(V.dim());
      for (std::size_t k = 0; k < V.dim(); ++k)
        b[k] = row_is_zero(en, k) ? ScalarTraits<S>::zero() : B(static_cast<int>(n), V.h[k]);
      J = J + kron(alg.classical ? fn : fn * Kn, diagonal(b) * en);
      fn = fn * W.f;
      Kn = Kn * W.K;
      en = en * V.e;
    }
    return J;
  }
};

// General rank-1 series, quantum or classical:
// B_n(h) = q^{nν} Π_{j=1}^n −1/([j]·q^l[l−ν−j+1]·q^{ν+2j}), ν = h − 2n.
template <class S>
TriangularSeries<S> universal_J(const RankOneAlgebra<S>& alg, const S& z) {
  using T = ScalarTraits<S>;
  return {alg, [alg, z](int n, int h) {
            int nu = h - 2 * n;
            S r = alg.qpow(static_cast<long>(n) * nu);
            for (int j = 1; j <= n; ++j) {
              S den = alg.qint(j) * alg.bracket(z, 1 - nu - j) * alg.qpow(nu + 2 * j);
              if (T::is_zero(den)) throw ResonanceError("universal J: denominator vanishes at n=" + std::to_string(n));
              r = -r / den;
            }
            return r;
          }};
}

// Classical closed form B_n(h;l) = ((−1)^n/n!) Π_{j=n+1}^{2n} (l − h + j)⁻¹.
template <class S>
TriangularSeries<S> closed_form_J(const S& l) {
  using T = ScalarTraits<S>;
  return {RankOneAlgebra<S>::classical_case(), [l](int n, int h) {
            S r = T::one();
            for (int k = 1; k <= n; ++k) r = -r / T::from_int(k);
            for (int j = n + 1; j <= 2 * n; ++j) {
              S den = l - T::from_int(h) + T::from_int(j);
              if (T::is_zero(den)) throw ResonanceError("closed-form J: l − h + j = 0");
              r = r / den;
            }
            return r;
          }};
}

// Φ^v: M_l → M_{l−ν}⊗V with Φ(x_l) = Σ_k f^k x_{l−ν} ⊗ v_k and v_0 = v.
// Stored as ṽ_k = q^{−kl} v_k, which depends on l only through z.
template <class S>
struct Intertwiner {
  int nu = 0;
  std::vector<std::vector<S>> components;
};

template <class S>
std::vector<S> apply_matrix(const Matrix<S>& m, const std::vector<S>& v) {
  std::vector<S> r(m.rows(), ScalarTraits<S>::zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!ScalarTraits<S>::is_zero(m(i, j)) && !ScalarTraits<S>::is_zero(v[j])) r[i] = r[i] + m(i, j) * v[j];
  return r;
}

template <class S>
Intertwiner<S> verma_intertwiner(const RankOneAlgebra<S>& alg, const Module<S>& V, std::size_t j, const S& z, int depth) {
  using T = ScalarTraits<S>;
  Intertwiner<S> phi;
  phi.nu = V.h[j];
  std::vector<S> v(V.dim(), T::zero());
  v[j] = T::one();
  phi.components.push_back(v);
  for (int k = 1; k <= depth; ++k) {
    S den = alg.qint(k) * alg.bracket(z, 1 - phi.nu - k) * alg.qpow(phi.nu + 2 * k);
    auto ev = apply_matrix(V.e, phi.components.back());
    bool zero = std::all_of(ev.begin(), ev.end(), [](const S& s) { return T::is_zero(s); });
    if (zero) {
      phi.components.push_back(std::vector<S>(V.dim(), T::zero()));
      continue;
    }
    if (T::is_zero(den)) throw ResonanceError("intertwiner: Verma module reducible at depth " + std::to_string(k));
    for (auto& c : ev) c = -c / den;
    phi.components.push_back(ev);
  }
  return phi;
}

// Residual of Δ(e)Φ(x_l) = 0, computed from the Verma action on M_{l−ν}
// (e f^k x = [k][l−ν−k+1] f^{k−1} x) and the e, K action on V.
template <class S>
double intertwiner_defect(const RankOneAlgebra<S>& alg, const Module<S>& V, const Intertwiner<S>& phi, const S& z) {
  using T = ScalarTraits<S>;
  S zp = alg.shift(z, -phi.nu);
  double d = 0;
  for (std::size_t k = 1; k < phi.components.size(); ++k) {
    auto kv = apply_matrix(V.K, phi.components[k]);
    auto ev = apply_matrix(V.e, phi.components[k - 1]);
    S verma = alg.qint(static_cast<long>(k)) * alg.bracket(zp, 1 - static_cast<long>(k));
    for (std::size_t i = 0; i < V.dim(); ++i) d = std::max(d, T::magnitude(verma * kv[i] + ev[i]));
  }
  return d;
}

// ⟨Φ^w_{λ−wt v} ∘ Φ^v_λ⟩ = J(w⊗v) = Σ_k q^{−k l''} f^k w ⊗ v_k, l'' = l − wt v − wt w.
template <class S>
Matrix<S> fusion_via_intertwiners(const RankOneAlgebra<S>& alg, const Module<S>& W, const Module<S>& V, const S& z) {
  std::size_t d = W.dim() * V.dim();
  Matrix<S> J(d, d);
  int depth = static_cast<int>(V.dim());
  for (std::size_t a = 0; a < W.dim(); ++a)
    for (std::size_t b = 0; b < V.dim(); ++b) {
      auto phi = verma_intertwiner(alg, V, b, z, depth);
      std::vector<S> w(W.dim(), ScalarTraits<S>::zero());
      w[a] = ScalarTraits<S>::one();
      for (std::size_t k = 0; k < phi.components.size(); ++k) {
        S c = alg.qpow(static_cast<long>(k) * (V.h[b] + W.h[a]));
        for (std::size_t x = 0; x < W.dim(); ++x)
          for (std::size_t y = 0; y < V.dim(); ++y) J(x * V.dim() + y, a * V.dim() + b) += c * w[x] * phi.components[k][y];
        w = apply_matrix(W.f, w);
      }
    }
  return J;
}

enum class JMethod { universal, abrr, intertwiner };

template <class S>
Matrix<S> fusion_J(const RankOneAlgebra<S>& alg, const Module<S>& W, const Module<S>& V, const S& z,
                   JMethod method = JMethod::universal) {
  switch (method) {
    case JMethod::abrr: return abrr_solve(alg, W, V, z);
    case JMethod::intertwiner: return fusion_via_intertwiners(alg, W, V, z);
    default: return universal_J(alg, z).eval(W, V);
  }
}

// R_{VW}(l) = J_{VW}⁻¹ R^{21} J^{21}_{WV}  (classical: J_{VW}⁻¹ J^{21}_{WV}).
template <class S>
HalfScaled<S> exchange(const RankOneAlgebra<S>& alg, const Module<S>& V, const Module<S>& W, const S& z,
                       JMethod method = JMethod::universal) {
  auto Jvw = fusion_J(alg, V, W, z, method);
  auto Jwv21 = swap_legs(fusion_J(alg, W, V, z, method), W.dim(), V.dim());
  auto inv = Jvw.inverse();
  if (alg.classical) return {0, inv * Jwv21};
  auto R = universal_R(alg, W, V);
  return {R.half, inv * swap_legs(R.matrix, W.dim(), V.dim()) * Jwv21};
}

// l → l − γ·w with γ = 1 in the z coordinate.
template <class S>
ShiftRule<S> rank_one_shift(const RankOneAlgebra<S>& alg) {
  return [alg](const Point<S>& p, const Weight& w, const S&) {
    Point<S> r = p;
    if (!w.empty() && w[0] != 0) r[0] = alg.shift(p[0], -w[0]);
    return r;
  };
}

// R_{VV} as a dynamical operator in z (the global q^{half/2} dropped; QDYBE is homogeneous).
template <class S>
DynamicalOperator<S> exchange_operator(const RankOneAlgebra<S>& alg, const Module<S>& V,
                                       JMethod method = JMethod::universal) {
  DynamicalOperator<S> op;
  op.first = V.space;
  op.second = V.space;
  op.eval = [alg, V, method](const Point<S>& p) { return exchange(alg, V, V, p[0], method).matrix; };
  op.shift = rank_one_shift(alg);
  return op;
}

// J^{1,2}(z − h^{(3)}) on V1⊗V2⊗V3.
template <class S>
Matrix<S> shifted_J12(const RankOneAlgebra<S>& alg, const Module<S>& V1, const Module<S>& V2, const Module<S>& V3,
                      const S& z, JMethod method) {
  std::size_t d12 = V1.dim() * V2.dim(), d3 = V3.dim();
  Matrix<S> r(d12 * d3, d12 * d3);
  for (std::size_t c = 0; c < d3; ++c) {
    auto J = fusion_J(alg, V1, V2, alg.shift(z, -V3.h[c]), method);
    for (std::size_t i = 0; i < d12; ++i)
      for (std::size_t j = 0; j < d12; ++j) r(i * d3 + c, j * d3 + c) = J(i, j);
  }
  return r;
}

// J^{12,3}(z) J^{1,2}(z − h^{(3)}) − J^{1,23}(z) J^{2,3}(z)
template <class S>
Matrix<S> twist_defect(const RankOneAlgebra<S>& alg, const Module<S>& V1, const Module<S>& V2, const Module<S>& V3,
                       const S& z, JMethod method = JMethod::universal) {
  auto lhs = fusion_J(alg, tensor_module(V1, V2), V3, z, method) * shifted_J12(alg, V1, V2, V3, z, method);
  auto rhs = fusion_J(alg, V1, tensor_module(V2, V3), z, method) *
             kron(Matrix<S>::identity(V1.dim()), fusion_J(alg, V2, V3, z, method));
  return lhs - rhs;
}

// J^{1..N} = J^{1,2..N} J^{2,3..N} ⋯ J^{N−1,N}
template <class S>
Matrix<S> multicomponent_J(const RankOneAlgebra<S>& alg, const std::vector<Module<S>>& mods, const S& z,
                           JMethod method = JMethod::universal) {
  if (mods.size() < 2) throw std::invalid_argument("multicomponent_J needs at least two modules");
  std::size_t total = 1;
  for (const auto& m : mods) total *= m.dim();
  Matrix<S> r = Matrix<S>::identity(total);
  std::size_t left = 1;
  for (std::size_t k = 0; k + 1 < mods.size(); ++k) {
    Module<S> rest = mods[k + 1];
    for (std::size_t t = k + 2; t < mods.size(); ++t) rest = tensor_module(rest, mods[t]);
    r = r * kron(Matrix<S>::identity(left), fusion_J(alg, mods[k], rest, z, method));
    left *= mods[k].dim();
  }
  return r;
}

// Q(μ) = Σ_n S⁻¹(e)^n B_n(−h; μ) f^n K^n with S⁻¹(e) = −K⁻¹e (classical −e, K = 1).
template <class S>
Matrix<S> q_operator(const RankOneAlgebra<S>& alg, const Module<S>& V, const S& z) {
  auto series = universal_J(alg, z);
  std::size_t d = V.dim();
  Matrix<S> Q(d, d);
  auto antipode_e = -(V.Kinv * V.e);
  for (std::size_t n = 0; n < d; ++n) {
    auto fn = matrix_power(V.f, static_cast<int>(n)) * matrix_power(V.K, static_cast<int>(n));
    std::vector<S> b(d);
    for (std::size_t k = 0; k < d; ++k)
      b[k] = row_is_zero(fn, k) ? ScalarTraits<S>::zero() : series.B(static_cast<int>(n), -V.h[k]);
    Q = Q + matrix_power(antipode_e, static_cast<int>(n)) * diagonal(b) * fn;
  }
  return Q;
}

// J − 1 may only raise the second-leg weight.
template <class S>
double triangularity_defect(const Module<S>& W, const Module<S>& V, const Matrix<S>& J) {
  double d = 0;
  for (std::size_t i = 0; i < J.rows(); ++i)
    for (std::size_t j = 0; j < J.cols(); ++j) {
      S x = J(i, j) - (i == j ? ScalarTraits<S>::one() : ScalarTraits<S>::zero());
      bool allowed = i != j && second_weight(V, i) > second_weight(V, j) &&
                     W.h[i / V.dim()] + second_weight(V, i) == W.h[j / V.dim()] + second_weight(V, j);
      if (!allowed) d = std::max(d, ScalarTraits<S>::magnitude(x));
    }
  return d;
}

// Exact-point residual reports.
template <class S>
verify::ResidualReport defect_report(const std::string& identity, const std::vector<double>& defects, double tol,
                                     verify::Params params = {}) {
  auto rep = verify::make_report(identity, 0, tol, std::move(params));
  for (double d : defects) rep.add(d);
  verify::finish(rep);
  return rep;
}

template <class S>
verify::ResidualReport twist_residual(const RankOneAlgebra<S>& alg, const Module<S>& V1, const Module<S>& V2,
                                      const Module<S>& V3, const std::vector<S>& points, double tol = 0.0) {
  std::vector<double> d;
  for (const auto& z : points) d.push_back(twist_defect(alg, V1, V2, V3, z).sup_norm());
  return defect_report<S>("twist", d, tol);
}

}  // namespace dybe::fusion
