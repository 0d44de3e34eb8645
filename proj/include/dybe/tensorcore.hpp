#pragma once

#include "matrix.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace dybe {

using Weight = std::vector<int>;

inline Weight add_weights(const Weight& a, const Weight& b, int sign = 1) {
  Weight r(std::max(a.size(), b.size()), 0);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += sign * b[k];
  return r;
}

inline bool is_zero_weight(const Weight& w) {
  for (int c : w)
    if (c != 0) return false;
  return true;
}

inline bool same_weight(const Weight& a, const Weight& b) { return is_zero_weight(add_weights(a, b, -1)); }

struct WeightVectorSpace {
  std::size_t dim = 0;
  std::vector<Weight> weights;
  std::string label;

  WeightVectorSpace() = default;
  WeightVectorSpace(std::vector<Weight> w, std::string name) : dim(w.size()), weights(std::move(w)), label(std::move(name)) {
    if (dim == 0) throw std::invalid_argument("weight space must have positive dimension");
  }

  // C^n with v_a of weight e_a.
  static WeightVectorSpace gl_vector(int n) {
    std::vector<Weight> w;
    for (int a = 0; a < n; ++a) {
      Weight e(n, 0);
      e[a] = 1;
      w.push_back(e);
    }
    return {w, "V(gl_" + std::to_string(n) + ")"};
  }
  // Rank-1 irreducible L_m with basis of h-weights m, m-2, ..., -m.
  static WeightVectorSpace rank_one(int m) {
    std::vector<Weight> w;
    for (int j = 0; j <= m; ++j) w.push_back({m - 2 * j});
    return {w, "L_" + std::to_string(m)};
  }
  static WeightVectorSpace trivial(int rank) { return {{Weight(rank, 0)}, "C"}; }

  friend bool operator==(const WeightVectorSpace& a, const WeightVectorSpace& b) {
    if (a.dim != b.dim) return false;
    for (std::size_t k = 0; k < a.dim; ++k)
      if (!same_weight(a.weights[k], b.weights[k])) return false;
    return true;
  }
};

// Basis order: index a*dim(B)+b for v_a⊗w_b.
inline WeightVectorSpace tensor(const WeightVectorSpace& a, const WeightVectorSpace& b) {
  std::vector<Weight> w;
  for (const auto& x : a.weights)
    for (const auto& y : b.weights) w.push_back(add_weights(x, y));
  return {w, a.label + "⊗" + b.label};
}

inline WeightVectorSpace tensor(const std::vector<WeightVectorSpace>& spaces) {
  if (spaces.empty()) throw std::invalid_argument("empty tensor product");
  WeightVectorSpace r = spaces.front();
  for (std::size_t k = 1; k < spaces.size(); ++k) r = tensor(r, spaces[k]);
  return r;
}

template <class S>
struct GradedOperator {
  WeightVectorSpace domain;
  WeightVectorSpace codomain;
  Matrix<S> entries;
  Weight declared_weight;

  GradedOperator() = default;
  GradedOperator(WeightVectorSpace dom, WeightVectorSpace cod, Matrix<S> m, Weight w = {})
      : domain(std::move(dom)), codomain(std::move(cod)), entries(std::move(m)), declared_weight(std::move(w)) {
    if (entries.rows() != codomain.dim || entries.cols() != domain.dim)
      throw std::invalid_argument("graded operator: matrix shape does not match spaces");
  }
  GradedOperator(const WeightVectorSpace& space, Matrix<S> m) : GradedOperator(space, space, std::move(m)) {}
};

// Largest entry that the grading rule forbids.
template <class S>
double weight_defect(const GradedOperator<S>& op) {
  double d = 0.0;
  for (std::size_t i = 0; i < op.codomain.dim; ++i)
    for (std::size_t j = 0; j < op.domain.dim; ++j) {
      if (same_weight(op.codomain.weights[i], add_weights(op.domain.weights[j], op.declared_weight))) continue;
      d = std::max(d, ScalarTraits<S>::magnitude(op.entries(i, j)));
    }
  return d;
}

template <class S>
using Point = std::vector<S>;

// λ ↦ λ − γ·w by default; rank-1 multiplicative coordinates supply their own rule.
template <class S>
using ShiftRule = std::function<Point<S>(const Point<S>&, const Weight&, const S&)>;

template <class S>
Point<S> additive_shift(const Point<S>& lambda, const Weight& w, const S& gamma) {
  Point<S> r = lambda;
  for (std::size_t k = 0; k < r.size() && k < w.size(); ++k)
    if (w[k] != 0) r[k] = r[k] - gamma * ScalarTraits<S>::from_int(w[k]);
  return r;
}

// Affine hyperplane {λ : normal·λ = offset}.
struct PoleHyperplane {
  std::vector<double> normal;
  double offset = 0.0;
};

template <class S>
struct DynamicalOperator {
  WeightVectorSpace first;
  WeightVectorSpace second;
  std::function<Matrix<S>(const Point<S>&)> eval;
  S step = ScalarTraits<S>::one();
  std::vector<PoleHyperplane> poles;
  ShiftRule<S> shift;

  WeightVectorSpace space() const { return tensor(first, second); }
  GradedOperator<S> operator()(const Point<S>& lambda) const { return {space(), eval(lambda)}; }
  Point<S> shifted(const Point<S>& lambda, const Weight& w, const S& gamma) const {
    return shift ? shift(lambda, w, gamma) : additive_shift(lambda, w, gamma);
  }
};

template <class S>
struct SpectralDynamicalOperator {
  WeightVectorSpace first;
  WeightVectorSpace second;
  std::function<Matrix<S>(const S&, const Point<S>&)> eval;
  S step = ScalarTraits<S>::one();
  std::vector<PoleHyperplane> poles;
  // values of u where eval has a pole (before adding periods)
  std::vector<S> u_poles;

  WeightVectorSpace space() const { return tensor(first, second); }
  GradedOperator<S> operator()(const S& u, const Point<S>& lambda) const { return {space(), eval(u, lambda)}; }
  DynamicalOperator<S> at(const S& u) const {
    auto f = eval;
    return {first, second, [f, u](const Point<S>& l) { return f(u, l); }, step, poles, {}};
  }
};

namespace detail {

inline std::vector<std::size_t> dims_of(const std::vector<WeightVectorSpace>& spaces) {
  std::vector<std::size_t> d;
  for (const auto& s : spaces) d.push_back(s.dim);
  return d;
}

inline std::vector<std::size_t> split_index(std::size_t idx, const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> r(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    r[k] = idx % dims[k];
    idx /= dims[k];
  }
  return r;
}

inline std::size_t join_index(const std::vector<std::size_t>& parts, const std::vector<std::size_t>& dims) {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + parts[k];
  return idx;
}

inline void check_legs(std::size_t i, std::size_t j, std::size_t n) {
  if (i == j) throw std::invalid_argument("embed: legs must differ");
  if (i >= n || j >= n) throw std::out_of_range("embed: leg index out of range");
}

}  // namespace detail

// Signed list of legs whose weights shift the dynamical argument.
using ShiftSpec = std::vector<std::pair<std::size_t, int>>;

// Core of R^{ij}(λ − γ Σ ± h^k): `block(w)` returns the two-leg matrix for the
// summed signed weight w of the shift legs.
template <class S, class Block>
Matrix<S> embed_with_shift(const Block& block, std::size_t i, std::size_t j, const ShiftSpec& shift_spec,
                           const std::vector<WeightVectorSpace>& spaces) {
  detail::check_legs(i, j, spaces.size());
  for (const auto& [k, sgn] : shift_spec) {
    if (k >= spaces.size()) throw std::out_of_range("shift leg out of range");
    if (k == i || k == j) throw std::invalid_argument("shift legs must be disjoint from operator legs");
    if (sgn != 1 && sgn != -1) throw std::invalid_argument("shift sign must be +1 or -1");
  }
  auto dims = detail::dims_of(spaces);
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::size_t dj = dims[j];
  Matrix<S> out(total, total);
  std::map<Weight, Matrix<S>> cache;
  for (std::size_t col = 0; col < total; ++col) {
    auto parts = detail::split_index(col, dims);
    Weight w;
    for (const auto& [k, sgn] : shift_spec) w = add_weights(w, spaces[k].weights[parts[k]], sgn);
    auto it = cache.find(w);
    if (it == cache.end()) it = cache.emplace(w, block(w)).first;
    const Matrix<S>& m = it->second;
    if (m.rows() != dims[i] * dj || m.cols() != dims[i] * dj)
      throw std::invalid_argument("embed: operator does not match the leg spaces");
    std::size_t in = parts[i] * dj + parts[j];
    for (std::size_t a = 0; a < dims[i]; ++a)
      for (std::size_t b = 0; b < dj; ++b) {
        const S& v = m(a * dj + b, in);
        if (ScalarTraits<S>::is_zero(v)) continue;
        auto p = parts;
        p[i] = a;
        p[j] = b;
        out(detail::join_index(p, dims), col) = v;
      }
  }
  return out;
}

template <class S>
GradedOperator<S> embed_pair(const GradedOperator<S>& op, std::size_t i, std::size_t j,
                             const std::vector<WeightVectorSpace>& spaces) {
  detail::check_legs(i, j, spaces.size());
  if (!(op.domain == tensor(spaces[i], spaces[j]))) throw std::invalid_argument("embed: dimension mismatch");
  auto m = embed_with_shift<S>([&](const Weight&) { return op.entries; }, i, j, {}, spaces);
  auto full = tensor(spaces);
  return {full, full, m, op.declared_weight};
}

template <class S>
GradedOperator<S> dynamical_eval(const DynamicalOperator<S>& F, const Point<S>& lambda, std::size_t i, std::size_t j,
                                 const ShiftSpec& shift_spec, const std::vector<WeightVectorSpace>& spaces,
                                 const S& gamma) {
  auto m = embed_with_shift<S>([&](const Weight& w) { return F.eval(F.shifted(lambda, w, gamma)); }, i, j,
                               shift_spec, spaces);
  auto full = tensor(spaces);
  return {full, full, m};
}

// P: v⊗w ↦ w⊗v from A⊗B to B⊗A.
template <class S>
Matrix<S> flip(std::size_t da, std::size_t db) {
  Matrix<S> p(da * db, da * db);
  for (std::size_t a = 0; a < da; ++a)
    for (std::size_t b = 0; b < db; ++b) p(b * da + a, a * db + b) = ScalarTraits<S>::one();
  return p;
}

// X^{21}: the operator on B⊗A obtained from X on A⊗B by swapping legs.
template <class S>
Matrix<S> swap_legs(const Matrix<S>& x, std::size_t da, std::size_t db) {
  return flip<S>(da, db) * x * flip<S>(db, da);
}

inline std::string describe(const Weight& w) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < w.size(); ++k) os << (k ? "," : "") << w[k];
  os << ")";
  return os.str();
}

}  // namespace dybe
