#pragma once

#include "tensorcore.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace dybe {

struct SampleBox {
  double lo = -5.0;
  double hi = 5.0;
};

// Rejection sampler for real dynamical points away from pole hyperplanes.
// `offsets` lists the displacements λ ↦ λ − d at which the operator will also
// be evaluated; every displaced point must clear every hyperplane.
class LambdaSampler {
 public:
  LambdaSampler(int rank, std::uint64_t seed, std::vector<PoleHyperplane> poles = {},
                std::vector<std::vector<double>> offsets = {}, SampleBox box = {}, double min_distance = 1e-3)
      : rank_(rank), rng_(seed), poles_(std::move(poles)), offsets_(std::move(offsets)), box_(box),
        min_distance_(min_distance) {
    if (offsets_.empty()) offsets_.push_back(std::vector<double>(rank, 0.0));
  }

  std::vector<double> next() {
    std::uniform_real_distribution<double> dist(box_.lo, box_.hi);
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::vector<double> l(rank_);
      for (auto& x : l) x = dist(rng_);
      if (clear(l)) return l;
    }
    throw ResonanceError("sampler: every candidate point was rejected by the pole filter");
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  bool clear(const std::vector<double>& l) const {
    for (const auto& d : offsets_)
      for (const auto& h : poles_) {
        double dot = 0.0, nn = 0.0;
        for (int k = 0; k < rank_; ++k) {
          double x = l[k] - (k < static_cast<int>(d.size()) ? d[k] : 0.0);
          dot += h.normal[k] * x;
          nn += h.normal[k] * h.normal[k];
        }
        if (std::abs(dot - h.offset) / std::sqrt(nn) < min_distance_) return false;
      }
    return true;
  }

  int rank_;
  std::mt19937_64 rng_;
  std::vector<PoleHyperplane> poles_;
  std::vector<std::vector<double>> offsets_;
  SampleBox box_;
  double min_distance_;
};

// All sums of at most `depth` single-leg weights (scaled by γ), plus zero.
inline std::vector<std::vector<double>> weight_offsets(const std::vector<WeightVectorSpace>& spaces, double gamma,
                                                       int depth = 2) {
  std::vector<Weight> singles;
  for (const auto& s : spaces)
    for (const auto& w : s.weights) singles.push_back(w);
  std::vector<Weight> acc{Weight{}};
  std::vector<Weight> frontier{Weight{}};
  for (int d = 0; d < depth; ++d) {
    std::vector<Weight> next;
    for (const auto& f : frontier)
      for (const auto& w : singles)
        for (int sgn : {1, -1}) next.push_back(add_weights(f, w, sgn));
    acc.insert(acc.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::vector<std::vector<double>> out;
  for (const auto& w : acc) {
    std::vector<double> d;
    for (int c : w) d.push_back(gamma * c);
    out.push_back(d);
  }
  return out;
}

// u_i uniform in [0.1, 0.9] + 0.05i, rejecting differences near declared u-poles.
inline std::vector<Complex> sample_spectral(std::mt19937_64& rng, int count, const std::vector<Complex>& u_poles,
                                            double min_distance = 1e-3) {
  std::uniform_real_distribution<double> dist(0.1, 0.9);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<Complex> u(count);
    for (auto& x : u) x = Complex(dist(rng), 0.05);
    bool ok = true;
    for (int i = 0; i < count && ok; ++i)
      for (int j = 0; j < count && ok; ++j) {
        if (i == j) continue;
        Complex d = u[i] - u[j];
        for (const auto& p : u_poles)
          if (std::abs(d - p) < min_distance) ok = false;
      }
    if (ok) return u;
  }
  throw ResonanceError("sampler: every spectral candidate was rejected");
}

template <class S>
Point<S> to_point(const std::vector<double>& l) {
  Point<S> p;
  for (double x : l) p.push_back(S(x));
  return p;
}

}  // namespace dybe
