#pragma once

#include "scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dybe {

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix over any scalar with ScalarTraits.
template <class S>
class Matrix {
 public:
  using T = ScalarTraits<S>;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T::zero()) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T::one();
    return m;
  }
  // E_{ij} unit matrix
  static Matrix unit(std::size_t n, std::size_t i, std::size_t j) {
    Matrix m(n, n);
    m(i, j) = T::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] + b.data_[k];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    Matrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] = r.data_[k] - b.data_[k];
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& v : r.data_) v = -v;
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const S& aik = a(i, k);
        if (T::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!T::is_zero(b(k, j))) r(i, j) = r(i, j) + aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const S& c, const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.data_) v = c * v;
    return r;
  }
  Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
  Matrix& operator-=(const Matrix& o) { return *this = *this - o; }
  Matrix& operator*=(const Matrix& o) { return *this = *this * o; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      if (!T::is_zero(a.data_[k] - b.data_[k])) return false;
    return true;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  S trace() const {
    S t = T::zero();
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t = t + (*this)(i, i);
    return t;
  }

  // Gauss-Jordan; the pivot is the entry with the largest pivot_score, which
  // is |z| for floats and "any unit" for exact rings.
  Matrix inverse() const {
    if (!square()) throw std::invalid_argument("inverse of non-square matrix");
    std::size_t n = rows_;
    Matrix a = *this;
    Matrix inv = identity(n);
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = n;
      double best = 0.0;
      for (std::size_t r = col; r < n; ++r) {
        double s = T::pivot_score(a(r, col));
        if (s > best) {
          best = s;
          piv = r;
          if (T::exact) break;
        }
      }
      if (piv == n) throw SingularMatrix("matrix is singular");
      if (piv != col) {
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(a(piv, j), a(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      }
      S p = a(col, col);
      for (std::size_t j = 0; j < n; ++j) {
        a(col, j) = a(col, j) / p;
        inv(col, j) = inv(col, j) / p;
      }
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || T::is_zero(a(r, col))) continue;
        S f = a(r, col);
        for (std::size_t j = 0; j < n; ++j) {
          if (!T::is_zero(a(col, j))) a(r, j) = a(r, j) - f * a(col, j);
          if (!T::is_zero(inv(col, j))) inv(r, j) = inv(r, j) - f * inv(col, j);
        }
      }
    }
    return inv;
  }

  double sup_norm() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, T::magnitude(v));
    return m;
  }

  template <class F>
  auto map(F&& f) const {
    using U = decltype(f(std::declval<const S&>()));
    Matrix<U> r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(i, j) = f((*this)(i, j));
    return r;
  }

 private:
  static void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (ScalarTraits<S>::is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return r;
}

template <class S>
double max_abs_diff(const Matrix<S>& a, const Matrix<S>& b) {
  return (a - b).sup_norm();
}

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
  return a * b - b * a;
}

}  // namespace dybe
