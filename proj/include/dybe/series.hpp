#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <climits>
#include <vector>

namespace dybe {

// Power series in one variable x, truncated after degree `order`.
// order == exact_order marks an exact polynomial (no truncation), so constants
// built by ScalarTraits mix freely with truncated series.
template <class R>
class Series {
 public:
  static constexpr int exact_order = INT_MAX;

  Series() : coeffs_{}, order_(exact_order) {}
  Series(const R& c) : coeffs_{c}, order_(exact_order) { trim(); }
  Series(std::vector<R> coeffs, int order) : coeffs_(std::move(coeffs)), order_(order) { trim(); }

  static Series monomial(int k, int order) {
    std::vector<R> c(static_cast<std::size_t>(k) + 1, R(0));
    c[k] = R(1);
    return Series(std::move(c), order);
  }

  int order() const { return order_; }
  bool truncated() const { return order_ != exact_order; }
  // Highest stored degree + 1; coefficients beyond are zero up to order().
  std::size_t size() const { return coeffs_.size(); }
  R operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : R(0); }
  const std::vector<R>& coeffs() const { return coeffs_; }

  Series truncate(int order) const { return Series(coeffs_, std::min(order, order_)); }

  Series operator-() const {
    Series r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }

  friend Series operator+(const Series& a, const Series& b) {
    int ord = std::min(a.order_, b.order_);
    std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
    std::vector<R> c(n, R(0));
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
    return Series(std::move(c), ord);
  }
  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

  friend Series operator*(const Series& a, const Series& b) {
    int ord = std::min(a.order_, b.order_);
    if (a.coeffs_.empty() || b.coeffs_.empty()) return Series(std::vector<R>{}, ord);
    std::size_t n = a.coeffs_.size() + b.coeffs_.size() - 1;
    if (ord != exact_order) n = std::min<std::size_t>(n, static_cast<std::size_t>(ord) + 1);
    std::vector<R> c(n, R(0));
    for (std::size_t i = 0; i < a.coeffs_.size() && i < n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size() && i + j < n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Series(std::move(c), ord);
  }

  // Division needs an invertible constant term of the divisor; an exact
  // polynomial divided by a non-constant polynomial has no finite expansion
  // and must carry a truncation order from one of the operands.
  friend Series operator/(const Series& a, const Series& b) {
    if (b.coeffs_.empty() || b.coeffs_[0] == 0) throw ResonanceError("series division: pole at x=0");
    if (b.coeffs_.size() == 1) {
      Series r = a;
      for (auto& c : r.coeffs_) c /= b.coeffs_[0];
      r.order_ = std::min(a.order_, b.order_);
      r.trim();
      return r;
    }
    int ord = std::min(a.order_, b.order_);
    if (ord == exact_order) throw std::logic_error("series division by a polynomial needs a truncation order");
    std::vector<R> inv(static_cast<std::size_t>(ord) + 1, R(0));
    R b0inv = R(1) / b.coeffs_[0];
    inv[0] = b0inv;
    for (int k = 1; k <= ord; ++k) {
      R s = 0;
      for (int j = 1; j <= k && j < static_cast<int>(b.coeffs_.size()); ++j) s += b.coeffs_[j] * inv[k - j];
      inv[k] = -s * b0inv;
    }
    return a * Series(std::move(inv), ord);
  }

  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  // g(x) -> g(c x)
  Series scaled(const R& c) const {
    Series r = *this;
    R p = 1;
    for (auto& v : r.coeffs_) {
      v *= p;
      p *= c;
    }
    r.trim();
    return r;
  }

  friend bool operator==(const Series& a, const Series& b) {
    int ord = std::min(a.order_, b.order_);
    std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (ord != exact_order && static_cast<int>(k) > ord) break;
      if (a[k] != b[k]) return false;
    }
    return true;
  }

 private:
  void trim() {
    if (order_ != exact_order && coeffs_.size() > static_cast<std::size_t>(order_) + 1)
      coeffs_.resize(static_cast<std::size_t>(order_) + 1);
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  std::vector<R> coeffs_;
  int order_;
};

template <class R>
struct ScalarTraits<Series<R>> {
  using S = Series<R>;
  static constexpr bool exact = ScalarTraits<R>::exact;
  static S zero() { return S(); }
  static S one() { return S(R(1)); }
  static S from_int(long n) { return S(R(n)); }
  static S from_rational(const Rational& r) { return S(ScalarTraits<R>::from_rational(r)); }
  static bool is_zero(const S& s) { return s.size() == 0; }
  static double magnitude(const S& s) {
    double m = 0;
    for (const auto& c : s.coeffs()) m = std::max(m, ScalarTraits<R>::magnitude(c));
    return m;
  }
  // Only a unit (nonzero constant term) may serve as a Gauss-Jordan pivot.
  static double pivot_score(const S& s) { return ScalarTraits<R>::pivot_score(s[0]); }
  static const char* backend() { return "exact-series"; }
};

}  // namespace dybe
