#pragma once

#include "fusion.hpp"
#include "series.hpp"

#include <cmath>
#include <map>
#include <random>

// Rank-1 trace functions and Macdonald-type difference operators.
//
// Coordinates: x = q^{−2 l_λ} is the expansion variable, Qμ = q^{l_μ}.
// A trace series stands for q^{sign·l_λ l_μ} Σ_k c_k x^k.
namespace dybe::trace {

using fusion::Module;
using fusion::RankOneAlgebra;

template <class S>
struct FormalTraceSeries {
  int prefactor_sign = 1;
  int order = 0;
  std::vector<S> coeffs;

  S operator[](std::size_t k) const { return k < coeffs.size() ? coeffs[k] : ScalarTraits<S>::zero(); }
};

template <class S>
std::size_t zero_weight_index(const Module<S>& V) {
  for (std::size_t k = 0; k < V.dim(); ++k)
    if (V.h[k] == 0) return k;
  throw std::invalid_argument("trace: V needs a zero weight space (V = L_2k)");
}

// c_k = V[0]-component at Verma depth k of Δ(f)^k Φ(x_μ), Φ normalized by ⟨Φ⟩ = v0.
// z is the coordinate of μ; the q^{±l_μ} factors cancel along every path.
template <class S>
std::vector<S> psi_coefficients(const RankOneAlgebra<S>& alg, const Module<S>& V, const S& z, int N) {
  using T = ScalarTraits<S>;
  std::size_t j0 = zero_weight_index(V);
  auto phi = fusion::verma_intertwiner(alg, V, j0, z, static_cast<int>(V.dim()));
  std::vector<std::vector<S>> state(static_cast<std::size_t>(N) + 1, std::vector<S>(V.dim(), T::zero()));
  for (std::size_t j = 0; j < phi.components.size() && j <= static_cast<std::size_t>(N); ++j) state[j] = phi.components[j];
  std::vector<S> c{state[0][j0]};
  for (int k = 1; k <= N; ++k) {
    std::vector<std::vector<S>> next(state.size(), std::vector<S>(V.dim(), T::zero()));
    for (std::size_t j = 0; j < state.size(); ++j) {
      // f⊗1 raises the Verma depth, K⁻¹⊗f acts on f^j x as q^{2j} (times the cancelled q^{−l})
      if (j + 1 < state.size())
        for (std::size_t i = 0; i < V.dim(); ++i) next[j + 1][i] = next[j + 1][i] + state[j][i];
      auto fv = fusion::apply_matrix(V.f, state[j]);
      S w = alg.qpow(2 * static_cast<long>(j));
      for (std::size_t i = 0; i < V.dim(); ++i) next[j][i] = next[j][i] + w * fv[i];
    }
    state = std::move(next);
    c.push_back(state[k][j0]);
  }
  return c;
}

// Ψ_V(λ, μ) = q^{l_λ l_μ} Σ_k c_k x^k.
template <class S>
FormalTraceSeries<S> psi_series(const RankOneAlgebra<S>& alg, const Module<S>& V, const S& z, int N) {
  return {1, N, psi_coefficients(alg, V, z, N)};
}

// δ_q = q^l − q^{−l}
template <class S>
S weyl_denominator(const S& Q) {
  return Q - ScalarTraits<S>::one() / Q;
}

// Coordinate of −μ−ρ, l_μ → −l_μ−1, from Qμ.
template <class S>
S reflected_coordinate(const RankOneAlgebra<S>& alg, const S& Qmu) {
  if (alg.classical) throw std::domain_error("trace functions need q ≠ 1");
  return ScalarTraits<S>::one() / (Qmu * Qmu * alg.q * alg.q);
}

// Value of Q(−μ−ρ) on V[0].
template <class S>
S q_scalar(const RankOneAlgebra<S>& alg, const Module<S>& V, const S& Qmu) {
  std::size_t j0 = zero_weight_index(V);
  return fusion::q_operator(alg, V, reflected_coordinate(alg, Qmu))(j0, j0);
}

// F_V(λ, μ) = δ_q(λ) Ψ_V(λ, −μ−ρ) Q(−μ−ρ)⁻¹ = q^{−l_λ l_μ} (1 − x) Σ c_k x^k / Q.
// drop_weyl_denominator omits the (1 − x) factor.
template <class S>
FormalTraceSeries<S> trace_F(const RankOneAlgebra<S>& alg, const Module<S>& V, const S& Qmu, int N,
                             bool drop_weyl_denominator = false) {
  auto c = psi_coefficients(alg, V, reflected_coordinate(alg, Qmu), N);
  S Qs = q_scalar(alg, V, Qmu);
  if (ScalarTraits<S>::is_zero(Qs)) throw ResonanceError("trace_F: Q(−μ−ρ) vanishes on V[0]");
  FormalTraceSeries<S> F{-1, N, {}};
  for (int k = 0; k <= N; ++k) {
    S g = c[k];
    if (!drop_weyl_denominator && k > 0) g = g - c[k - 1];
    F.coeffs.push_back(g / Qs);
  }
  return F;
}

// χ_W(q^{−2μ̄}) = Σ_m q^{−m l_μ}
template <class S>
S character(const Module<S>& W, const S& Qmu) {
  S s = ScalarTraits<S>::zero();
  for (int m : W.h) s = s + ipow(Qmu, -m);
  return s;
}

// (D f)(λ) = Σ_m T_m(x) f(λ + m), with f(λ + m) ↔ G(q^{−2m} x) on series.
template <class R>
struct ShiftDifferenceOperator {
  R q;
  int order = 0;
  std::map<int, Series<R>> terms;

  Series<R> apply(const Series<R>& G) const {
    Series<R> r(std::vector<R>{}, order);
    for (const auto& [m, T] : terms) r = r + T * G.scaled(ipow(q, -2 * m));
    return r;
  }
  // (A∘B)_m = Σ_{m1+m2=m} A_{m1}(x) B_{m2}(q^{−2 m1} x)
  friend ShiftDifferenceOperator compose(const ShiftDifferenceOperator& A, const ShiftDifferenceOperator& B) {
    ShiftDifferenceOperator r{A.q, std::min(A.order, B.order), {}};
    for (const auto& [m1, T1] : A.terms)
      for (const auto& [m2, T2] : B.terms) {
        auto t = T1 * T2.scaled(ipow(A.q, -2 * m1));
        auto it = r.terms.find(m1 + m2);
        if (it == r.terms.end())
          r.terms.emplace(m1 + m2, t);
        else
          it->second = it->second + t;
      }
    return r;
  }
};

using SeriesAlgebra = RankOneAlgebra<Series<Rational>>;

inline SeriesAlgebra series_algebra(const Rational& q) { return SeriesAlgebra::quantum(Series<Rational>(q)); }

// Coefficient of the shift m: trace over W[m]⊗V[0] of R_{WV}(−λ−ρ), expanded in x
// through the exchange coordinate X = q^{2(−l_λ−1)} = q^{−2} x.
inline ShiftDifferenceOperator<Rational> macdonald_op(const SeriesAlgebra& alg, const Module<Series<Rational>>& W,
                                                      const Module<Series<Rational>>& V, int N) {
  Rational q = alg.q[0];
  Series<Rational> X(std::vector<Rational>{Rational(0), 1 / (q * q)}, N);
  auto R = fusion::exchange(alg, W, V, X);
  if (R.half != 0) throw std::invalid_argument("macdonald_op: V must have even highest weight");
  std::size_t j0 = zero_weight_index(V);
  ShiftDifferenceOperator<Rational> D{q, N, {}};
  for (std::size_t a = 0; a < W.dim(); ++a) {
    std::size_t i = a * V.dim() + j0;
    auto it = D.terms.find(W.h[a]);
    if (it == D.terms.end())
      D.terms.emplace(W.h[a], R.matrix(i, i).truncate(N));
    else
      it->second = it->second + R.matrix(i, i);
  }
  return D;
}

inline ShiftDifferenceOperator<Rational> macdonald_op(const Rational& q, int w, int v, int N) {
  auto alg = series_algebra(q);
  return macdonald_op(alg, fusion::fd_module(alg, w), fusion::fd_module(alg, v), N);
}

inline Series<Rational> to_series(const FormalTraceSeries<Rational>& F) { return Series<Rational>(F.coeffs, F.order); }

// Σ_m T_m(x) Qμ^{−m} G(q^{−2m}x) − χ_W G(x), coefficients 0..N−2.
inline std::vector<Rational> eigen_defect(const Rational& q, int v, int w, const Rational& Qmu, int N,
                                          bool drop_weyl_denominator = false) {
  auto alg = RankOneAlgebra<Rational>::quantum(q);
  auto V = fusion::fd_module(alg, v);
  auto W = fusion::fd_module(alg, w);
  auto G = to_series(trace_F(alg, V, Qmu, N, drop_weyl_denominator));
  auto D = macdonald_op(q, w, v, N);
  Series<Rational> lhs(std::vector<Rational>{}, N);
  for (const auto& [m, T] : D.terms) lhs = lhs + T * G.scaled(ipow(q, -2 * m)) * Series<Rational>(ipow(Qmu, -m));
  auto diff = lhs - G * Series<Rational>(character(W, Qmu));
  std::vector<Rational> out;
  for (int k = 0; k <= N - 2; ++k) out.push_back(diff[k]);
  return out;
}

inline verify::ResidualReport eigen_check(const Rational& q, int v, int w, const std::vector<Rational>& Qmus, int N,
                                          double tol = 0.0, bool drop_weyl_denominator = false) {
  auto rep = verify::make_report("eigen", 0, tol,
                                 {{"V", "L_" + std::to_string(v)}, {"W", "L_" + std::to_string(w)},
                                  {"q", q.str()}, {"order", std::to_string(N)}});
  for (const auto& Qmu : Qmus) {
    double m = 0;
    for (const auto& c : eigen_defect(q, v, w, Qmu, N, drop_weyl_denominator))
      m = std::max(m, ScalarTraits<Rational>::magnitude(c));
    rep.add(m);
  }
  verify::finish(rep);
  return rep;
}

// Coefficients g_1.. of G rebuilt from g_0 alone through the eigen equation;
// returns the largest mismatch against the trace-based coefficients.
inline double solution_basis_defect(const Rational& q, int v, int w, const Rational& Qmu, int N) {
  auto alg = RankOneAlgebra<Rational>::quantum(q);
  auto V = fusion::fd_module(alg, v);
  auto W = fusion::fd_module(alg, w);
  auto F = trace_F(alg, V, Qmu, N);
  auto D = macdonald_op(q, w, v, N);
  Rational chi = character(W, Qmu);
  std::vector<Rational> g{F.coeffs[0]};
  double defect = 0;
  for (int p = 1; p <= N - 2; ++p) {
    Rational diag = -chi, rest = 0;
    for (const auto& [m, T] : D.terms) {
      Rational s = ipow(Qmu, -m);
      diag += s * T[0] * ipow(q, -2 * m * p);
      for (int i = 0; i < p; ++i) rest += s * T[p - i] * ipow(q, -2 * m * i) * g[i];
    }
    if (diag == 0) throw ResonanceError("solution basis: eigen recursion degenerates at order " + std::to_string(p));
    g.push_back(-rest / diag);
    defect = std::max(defect, ScalarTraits<Rational>::magnitude(g.back() - F.coeffs[p]));
  }
  return defect;
}

// Largest coefficient of (A∘B − B∘A) on x^p, p ≤ N−2, up to order N−2.
inline double commutator_defect(const ShiftDifferenceOperator<Rational>& A, const ShiftDifferenceOperator<Rational>& B,
                                int N) {
  double d = 0;
  for (int p = 0; p <= N - 2; ++p) {
    auto x = Series<Rational>::monomial(p, N);
    auto diff = A.apply(B.apply(x)) - B.apply(A.apply(x));
    for (int k = 0; k <= N - 2; ++k) d = std::max(d, ScalarTraits<Rational>::magnitude(diff[k]));
  }
  return d;
}

// Largest coefficient of (A − B) on x^p, p ≤ N−2, up to order N−2.
inline double operator_difference(const ShiftDifferenceOperator<Rational>& A, const ShiftDifferenceOperator<Rational>& B,
                                  int N) {
  double d = 0;
  for (int p = 0; p <= N - 2; ++p) {
    auto x = Series<Rational>::monomial(p, N);
    auto diff = A.apply(x) - B.apply(x);
    for (int k = 0; k <= N - 2; ++k) d = std::max(d, ScalarTraits<Rational>::magnitude(diff[k]));
  }
  return d;
}

inline verify::ResidualReport commutativity_check(const Rational& q, int w1, int w2, int v, int N, double tol = 0.0) {
  auto rep = verify::make_report("commute", 0, tol,
                                 {{"W1", "L_" + std::to_string(w1)}, {"W2", "L_" + std::to_string(w2)},
                                  {"V", "L_" + std::to_string(v)}, {"q", q.str()}, {"order", std::to_string(N)}});
  rep.add(commutator_defect(macdonald_op(q, w1, v, N), macdonald_op(q, w2, v, N), N));
  verify::finish(rep);
  return rep;
}

// D_{W1⊗W2} against D_{W1}∘D_{W2}, W1⊗W2 built through the coproduct.
inline double tensor_product_defect(const Rational& q, int w1, int w2, int v, int N) {
  auto alg = series_algebra(q);
  auto W = fusion::tensor_module(fusion::fd_module(alg, w1), fusion::fd_module(alg, w2));
  auto Dt = macdonald_op(alg, W, fusion::fd_module(alg, v), N);
  return operator_difference(Dt, compose(macdonald_op(q, w1, v, N), macdonald_op(q, w2, v, N)), N);
}

// Numeric F_V(λ, μ) from the truncated series.
inline Complex evaluate_F(double q, int v, double l_lambda, double l_mu, int N, double* tail = nullptr) {
  auto alg = RankOneAlgebra<Complex>::quantum(Complex(q));
  auto V = fusion::fd_module(alg, v);
  auto F = trace_F(alg, V, Complex(std::pow(q, l_mu)), N);
  double x = std::pow(q, -2.0 * l_lambda);
  Complex s = 0.0, p = 1.0;
  double cmax = 0;
  for (const auto& c : F.coeffs) {
    s += c * p;
    p *= x;
    cmax = std::max(cmax, std::abs(c));
  }
  double pre = std::pow(q, -l_lambda * l_mu);
  if (tail) *tail = pre * cmax * std::pow(std::abs(x), N + 1) / (1 - std::abs(x));
  return pre * s;
}

struct SymmetrySample {
  double l_lambda, l_mu;
};

// l ∈ [−3, −1.1], at least 0.1 from integers (resonant Verma modules).
inline std::vector<SymmetrySample> symmetry_samples(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-3.0, -1.1);
  auto draw = [&] {
    for (;;) {
      double l = d(rng);
      if (std::abs(l - std::round(l)) >= 0.1) return l;
    }
  };
  std::vector<SymmetrySample> s;
  for (int k = 0; k < count; ++k) {
    double a = draw();
    double b = draw();
    s.push_back({a, b});
  }
  return s;
}

// |F_V(λ, μ) − F_V(μ, λ)| with |x_λ|, |x_μ| ≤ 1/4; the report tolerance
// includes the truncation tail bound.
inline verify::ResidualReport symmetry_check(double q, int v, int samples, int N, double tol, std::uint64_t seed) {
  if (!(q > 0 && q < 1)) throw std::invalid_argument("symmetry_check: q must lie in (0, 1)");
  auto rep = verify::make_report("symmetry", seed, tol,
                                 {{"V", "L_" + std::to_string(v)}, {"q", std::to_string(q)}, {"order", std::to_string(N)}});
  double tail_max = 0;
  for (const auto& s : symmetry_samples(samples, seed)) {
    for (double l : {s.l_lambda, s.l_mu})
      if (std::pow(q, -2 * l) > 0.25) throw std::invalid_argument("symmetry_check: sample outside |x| <= 1/4");
    double t1 = 0, t2 = 0;
    Complex a = evaluate_F(q, v, s.l_lambda, s.l_mu, N, &t1);
    Complex b = evaluate_F(q, v, s.l_mu, s.l_lambda, N, &t2);
    tail_max = std::max(tail_max, t1 + t2);
    rep.add(std::abs(a - b));
  }
  rep.tol = tol + tail_max;
  rep.params.push_back({"tail_bound", std::to_string(tail_max)});
  verify::finish(rep);
  return rep;
}

}  // namespace dybe::trace
