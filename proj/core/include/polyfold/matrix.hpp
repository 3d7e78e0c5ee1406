#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "polyfold/scalar.hpp"

namespace polyfold {

// Dense row-major matrix over double or Rational.
template <class S>
class Matrix {
 public:
  using value_type = S;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const S& fill = S(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  S& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const S& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<S> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const S> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::vector<S> column(std::size_t j) const {
    std::vector<S> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  const std::vector<S>& data() const noexcept { return data_; }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<S> data_;
};

template <class S>
Matrix<S> multiply(const Matrix<S>& a, const Matrix<S>& b) {
  assert(a.cols() == b.rows());
  Matrix<S> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const S& ail = a(i, l);
      if (ail == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
    }
  }
  return out;
}

template <class S>
S max_abs(const Matrix<S>& m) {
  S best(0);
  for (const S& x : m.data()) {
    S a = abs_value(x);
    if (a > best) best = a;
  }
  return best;
}

template <class S>
S max_abs(std::span<const S> v) {
  S best(0);
  for (const S& x : v) {
    S a = abs_value(x);
    if (a > best) best = a;
  }
  return best;
}

// ||a b||_inf one product row at a time.
template <class S>
S product_max_abs(const Matrix<S>& a, const Matrix<S>& b) {
  assert(a.cols() == b.rows());
  S best(0);
  std::vector<S> row(b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(row.begin(), row.end(), S(0));
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const S& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) row[j] += aik * b(k, j);
    }
    for (const S& x : row) {
      S v = abs_value(x);
      if (v > best) best = v;
    }
  }
  return best;
}

template <class S>
bool is_nonnegative(const Matrix<S>& m) {
  for (const S& x : m.data())
    if (x < 0) return false;
  return true;
}

template <class S>
S dot(std::span<const S> a, std::span<const S> b) {
  assert(a.size() == b.size());
  S acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace polyfold
