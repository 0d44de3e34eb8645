#pragma once

#include "liealg.hpp"
#include "rmatrix.hpp"
#include "verify.hpp"

#include <numeric>
#include <optional>

namespace dybe::gauge {

using CMatrix = Matrix<Complex>;
using ScalarField = std::function<Complex(const Point<Complex>&)>;

inline Point<Complex> minus_omega(const Point<Complex>& l, int a, Complex gamma) {
  Point<Complex> r = l;
  r[a] -= gamma;
  return r;
}

struct MultiplicativeTwoForm {
  int n = 3;
  std::function<Complex(int a, int b, const Point<Complex>&)> phi;
};

// φ_ab(λ)φ_bc(λ)φ_ca(λ) against φ_ab(λ−γω_c)φ_bc(λ−γω_a)φ_ca(λ−γω_b), as |LHS/RHS − 1|
inline double closedness_defect(const MultiplicativeTwoForm& f, const Point<Complex>& l, Complex gamma) {
  double d = 0.0;
  for (int a = 0; a < f.n; ++a)
    for (int b = 0; b < f.n; ++b)
      for (int c = 0; c < f.n; ++c) {
        if (a == b || b == c || a == c) continue;
        Complex lhs = f.phi(a, b, l) * f.phi(b, c, l) * f.phi(c, a, l);
        Complex rhs = f.phi(a, b, minus_omega(l, c, gamma)) * f.phi(b, c, minus_omega(l, a, gamma)) *
                      f.phi(c, a, minus_omega(l, b, gamma));
        if (rhs == Complex(0.0) || lhs == Complex(0.0)) throw ResonanceError("is_closed: form vanishes at a sample");
        d = std::max(d, std::abs(lhs / rhs - 1.0));
      }
  return d;
}

inline double antisymmetry_defect(const MultiplicativeTwoForm& f, const Point<Complex>& l) {
  double d = 0.0;
  for (int a = 0; a < f.n; ++a)
    for (int b = 0; b < f.n; ++b)
      if (a != b) d = std::max(d, std::abs(f.phi(a, b, l) * f.phi(b, a, l) - 1.0));
  return d;
}

inline verify::ResidualReport is_closed(const MultiplicativeTwoForm& f, Complex gamma, int samples, std::uint64_t seed,
                                        double tol = 1e-12, verify::Params params = {}) {
  LambdaSampler sampler(f.n, seed);
  auto rep = verify::make_report("closed-form", seed, tol, std::move(params));
  for (int s = 0; s < samples; ++s) {
    auto l = to_point<Complex>(sampler.next());
    rep.add(std::max(closedness_defect(f, l, gamma), antisymmetry_defect(f, l)));
  }
  verify::finish(rep);
  return rep;
}

// φ_ab(λ) = ξ_a(λ)ξ_b(λ−γω_a)ξ_a(λ−γω_b)^{-1}ξ_b(λ)^{-1}
inline MultiplicativeTwoForm exact_from_potential(std::vector<ScalarField> xi, Complex gamma) {
  int n = static_cast<int>(xi.size());
  MultiplicativeTwoForm f;
  f.n = n;
  f.phi = [xi, gamma](int a, int b, const Point<Complex>& l) {
    Complex den = xi[a](minus_omega(l, b, gamma)) * xi[b](l);
    if (den == Complex(0.0)) throw ResonanceError("exact_from_potential: potential vanishes");
    return xi[a](l) * xi[b](minus_omega(l, a, gamma)) / den;
  };
  return f;
}

// ---- quantum plans -------------------------------------------------------

enum class Type3Reading {
  printed,   // α and β factors exactly as printed (does not preserve QDYBE)
  corrected  // reading that preserves the spectral QDYBE; see README
};

struct QuantumGaugePlan {
  std::optional<MultiplicativeTwoForm> form;
  std::vector<int> permutation;  // σ; empty = identity
  std::vector<Complex> shift;    // ν; empty = 0
  std::function<Complex(const Complex& u)> scalar;  // c(u); empty = 1
  ScalarField psi;                                   // type 3
  Type3Reading reading = Type3Reading::corrected;
  std::optional<Complex> u_scale;                    // type 4

  bool spectral_only() const { return static_cast<bool>(psi) || u_scale.has_value(); }
};

inline void validate(const QuantumGaugePlan& plan, int n) {
  if (!plan.permutation.empty()) {
    if (static_cast<int>(plan.permutation.size()) != n) throw std::invalid_argument("gauge: permutation has wrong size");
    std::vector<int> s = plan.permutation;
    std::sort(s.begin(), s.end());
    for (int k = 0; k < n; ++k)
      if (s[k] != k) throw std::invalid_argument("gauge: permutation is not a bijection");
  }
  if (!plan.shift.empty() && static_cast<int>(plan.shift.size()) != n) throw std::invalid_argument("gauge: shift has wrong rank");
  if (plan.form && plan.form->n != n) throw std::invalid_argument("gauge: form rank mismatch");
}

// Applies, in order: form twist (α·φ), permutation, λ → λ−ν, scalar c(u),
// the type-3 ψ factors, and u → b·u.
inline rmatrix::AlphaBetaTable<Complex> apply_quantum(rmatrix::AlphaBetaTable<Complex> t, const QuantumGaugePlan& plan,
                                                      Complex gamma) {
  int n = t.n;
  validate(plan, n);
  if (plan.spectral_only() && !t.spectral) throw std::invalid_argument("gauge: types 3 and 4 need a spectral R-matrix");
  auto diag_of = [](const rmatrix::AlphaBetaTable<Complex>& tt) {
    auto d = tt.diagonal;
    return std::function<Complex(int, const Complex&, const Point<Complex>&)>(
        [d](int a, const Complex& u, const Point<Complex>& l) { return d ? d(a, u, l) : Complex(1.0); });
  };

  if (plan.form) {
    auto phi = plan.form->phi;
    auto alpha = t.alpha;
    t.alpha = [phi, alpha](int a, int b, const Complex& u, const Point<Complex>& l) { return alpha(a, b, u, l) * phi(a, b, l); };
  }
  if (!plan.permutation.empty()) {
    // R'(λ) = (P_σ⊗P_σ) R(σ⁻¹λ) (P_σ⊗P_σ)⁻¹ with P_σ v_a = v_{σ(a)}; coordinates move with the basis
    std::vector<int> sigma = plan.permutation;
    std::vector<int> inv(n);
    for (int a = 0; a < n; ++a) inv[sigma[a]] = a;
    auto back = [sigma, n](const Point<Complex>& l) {
      // (σ⁻¹λ)_a = λ_{σ(a)}
      Point<Complex> r(n);
      for (int a = 0; a < n; ++a) r[a] = l[sigma[a]];
      return r;
    };
    auto alpha = t.alpha, beta = t.beta;
    auto diag = diag_of(t);
    t.alpha = [alpha, inv, back](int a, int b, const Complex& u, const Point<Complex>& l) {
      return alpha(inv[a], inv[b], u, back(l));
    };
    t.beta = [beta, inv, back](int a, int b, const Complex& u, const Point<Complex>& l) {
      return beta(inv[a], inv[b], u, back(l));
    };
    t.diagonal = [diag, inv, back](int a, const Complex& u, const Point<Complex>& l) { return diag(inv[a], u, back(l)); };
    for (auto& h : t.poles) {
      std::vector<double> moved(h.normal.size(), 0.0);
      for (int a = 0; a < n && a < static_cast<int>(h.normal.size()); ++a) moved[sigma[a]] = h.normal[a];
      h.normal = moved;
    }
  }
  if (!plan.shift.empty()) {
    auto nu = plan.shift;
    auto sh = [nu](const Point<Complex>& l) {
      Point<Complex> r = l;
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= nu[k];
      return r;
    };
    auto alpha = t.alpha, beta = t.beta;
    auto diag = diag_of(t);
    t.alpha = [alpha, sh](int a, int b, const Complex& u, const Point<Complex>& l) { return alpha(a, b, u, sh(l)); };
    t.beta = [beta, sh](int a, int b, const Complex& u, const Point<Complex>& l) { return beta(a, b, u, sh(l)); };
    t.diagonal = [diag, sh](int a, const Complex& u, const Point<Complex>& l) { return diag(a, u, sh(l)); };
    for (auto& h : t.poles)
      for (std::size_t k = 0; k < h.normal.size(); ++k) h.offset += h.normal[k] * nu[k].real();
  }
  if (plan.scalar) {
    auto c = plan.scalar;
    auto alpha = t.alpha, beta = t.beta;
    auto diag = diag_of(t);
    t.alpha = [alpha, c](int a, int b, const Complex& u, const Point<Complex>& l) { return c(u) * alpha(a, b, u, l); };
    t.beta = [beta, c](int a, int b, const Complex& u, const Point<Complex>& l) { return c(u) * beta(a, b, u, l); };
    t.diagonal = [diag, c](int a, const Complex& u, const Point<Complex>& l) { return c(u) * diag(a, u, l); };
  }
  if (plan.psi) {
    auto psi = plan.psi;
    auto alpha = t.alpha, beta = t.beta;
    auto diag = diag_of(t);
    auto at = [psi, gamma](const Point<Complex>& l, int a, int b, double sa, double sb) {
      Point<Complex> r = l;
      if (a >= 0) r[a] += sa * gamma;
      if (b >= 0) r[b] += sb * gamma;
      return psi(r);
    };
    if (plan.reading == Type3Reading::printed) {
      t.alpha = [alpha, at](int a, int b, const Complex& u, const Point<Complex>& l) {
        Complex e = at(l, -1, -1, 0, 0) - 2.0 * at(l, a, -1, -1, 0) + at(l, a, b, -1, -1);
        return std::exp(u * e) * alpha(a, b, u, l);
      };
      t.beta = [beta, at](int a, int b, const Complex& u, const Point<Complex>& l) {
        Complex e = at(l, -1, -1, 0, 0) - at(l, a, -1, -1, 0) - at(l, b, -1, -1, 0) + at(l, a, b, -1, -1);
        return std::exp(u * e) * beta(a, b, u, l);
      };
    } else {
      auto sym = [at](int a, int b, const Point<Complex>& l) {
        return at(l, -1, -1, 0, 0) - at(l, a, -1, -1, 0) - at(l, b, -1, -1, 0) + at(l, a, b, -1, -1);
      };
      t.alpha = [alpha, sym](int a, int b, const Complex& u, const Point<Complex>& l) {
        return std::exp(u * sym(a, b, l)) * alpha(a, b, u, l);
      };
      t.diagonal = [diag, sym](int a, const Complex& u, const Point<Complex>& l) {
        return std::exp(u * sym(a, a, l)) * diag(a, u, l);
      };
      t.beta = [beta, at](int a, int b, const Complex& u, const Point<Complex>& l) {
        Complex e = at(l, -1, -1, 0, 0) - 2.0 * at(l, b, -1, -1, 0) + at(l, a, b, -1, -1);
        return std::exp(u * e) * beta(a, b, u, l);
      };
    }
  }
  if (plan.u_scale) {
    Complex b = *plan.u_scale;
    auto alpha = t.alpha, beta = t.beta;
    auto diag = diag_of(t);
    t.alpha = [alpha, b](int a, int c, const Complex& u, const Point<Complex>& l) { return alpha(a, c, b * u, l); };
    t.beta = [beta, b](int a, int c, const Complex& u, const Point<Complex>& l) { return beta(a, c, b * u, l); };
    t.diagonal = [diag, b](int a, const Complex& u, const Point<Complex>& l) { return diag(a, b * u, l); };
    for (auto& p : t.u_poles) p /= b;
  }
  return t;
}

// ---- classical plans -----------------------------------------------------

// ψ with analytic gradient and Hessian in the gl_n coordinates of λ.
struct Potential {
  std::function<Complex(const Point<Complex>&)> value;
  std::function<std::vector<Complex>(const Point<Complex>&)> gradient;
  std::function<CMatrix(const Point<Complex>&)> hessian;
};

struct ClassicalGaugePlan {
  // ω = Σ C_ij(λ) x_i∧x_j
  std::function<CMatrix(const Point<Complex>&)> two_form;
  Complex scale = 1.0;            // a
  std::vector<Complex> shift;     // ν
  std::vector<int> weyl;          // permutation σ
  std::optional<Complex> u_scale; // b
  std::optional<Potential> psi;   // item 4
};

inline liealg::ClassicalDynOperator apply_classical(liealg::ClassicalDynOperator r, const ClassicalGaugePlan& plan) {
  int n = r.n;
  auto L = liealg::sl_data(n);
  if ((plan.u_scale || plan.psi) && !r.spectral) throw std::invalid_argument("gauge: items 3 and 4 need a spectral r-matrix");
  if (plan.psi && !r.has_split()) throw std::invalid_argument("gauge: item 4 needs the root-split form of r");
  if (!plan.shift.empty() && static_cast<int>(plan.shift.size()) != n) throw std::invalid_argument("gauge: shift has wrong rank");
  r.derivative = nullptr;

  if (plan.psi) {
    // S_ij += u ∂²ψ/∂x_i∂x_j, φ_α *= e^{u ∂_α ψ}
    auto psi = *plan.psi;
    auto S = r.cartan_part;
    auto phi = r.phi;
    auto dirs = std::vector<std::vector<double>>();
    for (int i = 0; i + 1 < n; ++i) dirs.push_back(L.cartan_direction(i));
    auto S2 = [S, psi, dirs](const Complex& u, const Point<Complex>& l) {
      CMatrix s = S(u, l);
      CMatrix H = psi.hessian(l);
      for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = 0; j < dirs.size(); ++j) {
          Complex h = 0.0;
          for (std::size_t a = 0; a < dirs[i].size(); ++a)
            for (std::size_t b = 0; b < dirs[j].size(); ++b) h += dirs[i][a] * H(a, b) * dirs[j][b];
          s(i, j) += u * h;
        }
      return s;
    };
    auto phi2 = [phi, psi](const liealg::Root& a, const Complex& u, const Point<Complex>& l) {
      auto g = psi.gradient(l);
      return phi(a, u, l) * std::exp(u * (g[a.a] - g[a.b]));
    };
    auto poles = r.poles;
    auto u_poles = r.u_poles;
    r = liealg::from_split(n, true, S2, phi2);
    r.poles = poles;
    r.u_poles = u_poles;
  }
  if (plan.two_form) {
    auto C = plan.two_form;
    auto f = r.eval;
    r.eval = [f, C, L](const Complex& u, const Point<Complex>& l) {
      CMatrix m = f(u, l);
      CMatrix c = C(l);
      for (std::size_t i = 0; i < L.cartan.size(); ++i)
        for (std::size_t j = 0; j < L.cartan.size(); ++j)
          if (c(i, j) != Complex(0.0))
            m += c(i, j) * (kron(L.cartan[i], L.cartan[j]) - kron(L.cartan[j], L.cartan[i]));
      return m;
    };
    r.cartan_part = nullptr;
    r.phi = nullptr;
  }
  if (!plan.weyl.empty()) {
    std::vector<int> sigma = plan.weyl;
    if (static_cast<int>(sigma.size()) != n) throw std::invalid_argument("gauge: Weyl permutation has wrong size");
    CMatrix Ps(n, n);
    for (int a = 0; a < n; ++a) Ps(sigma[a], a) = 1.0;
    auto PP = kron(Ps, Ps);
    auto PPt = PP.transpose();
    auto f = r.eval;
    r.eval = [f, sigma, PP, PPt, n](const Complex& u, const Point<Complex>& l) {
      Point<Complex> back(n);
      for (int a = 0; a < n; ++a) back[a] = l[sigma[a]];
      return PP * f(u, back) * PPt;
    };
    r.cartan_part = nullptr;
    r.phi = nullptr;
    r.poles = liealg::root_poles(n, {0.0});
  }
  if (plan.scale != Complex(1.0) || !plan.shift.empty()) {
    Complex a = plan.scale;
    auto nu = plan.shift;
    auto f = r.eval;
    r.eval = [f, a, nu](const Complex& u, const Point<Complex>& l) {
      Point<Complex> m = l;
      for (std::size_t k = 0; k < m.size(); ++k) m[k] = a * m[k] - (nu.empty() ? Complex(0.0) : nu[k]);
      return a * f(u, m);
    };
    r.cartan_part = nullptr;
    r.phi = nullptr;
    for (auto& h : r.poles) {
      for (std::size_t k = 0; k < h.normal.size(); ++k) h.offset += h.normal[k] * (nu.empty() ? 0.0 : nu[k].real());
      h.offset /= a.real();
    }
  }
  if (plan.u_scale) {
    Complex b = *plan.u_scale;
    auto f = r.eval;
    r.eval = [f, b](const Complex& u, const Point<Complex>& l) { return f(b * u, l); };
    r.cartan_part = nullptr;
    r.phi = nullptr;
    for (auto& p : r.u_poles) p /= b;
  }
  return r;
}

}  // namespace dybe::gauge
