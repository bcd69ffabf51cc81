#pragma once

// Dense matrices over a coefficient field and Gaussian elimination.

#include <cstddef>
#include <vector>

#include "dcx/error.hpp"
#include "dcx/field.hpp"

namespace dcx {

template <Field F>
class Matrix {
 public:
  using Element = typename F::Element;

  Matrix(std::size_t rows, std::size_t cols, const F& field)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols, field.zero()) {}

  static Matrix identity(std::size_t n, const F& field) {
    Matrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const F& field() const noexcept { return field_; }

  Element& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Element& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ArgumentError("matrix shape mismatch");
    const F& k = a.field_;
    Matrix r(a.rows_, b.cols_, k);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        if (k.is_zero(a(i, l))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) = k.add(r(i, j), k.mul(a(i, l), b(l, j)));
      }
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      if (!a.field_.equal(a.data_[i], b.data_[i])) return false;
    return true;
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  void scale_row(std::size_t r, const Element& c) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = field_.mul((*this)(r, j), c);
  }
  /// row[dst] += c * row[src]
  void add_row(std::size_t dst, std::size_t src, const Element& c) {
    if (field_.is_zero(c)) return;
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(dst, j) = field_.add((*this)(dst, j), field_.mul(c, (*this)(src, j)));
  }
  /// col[dst] += c * col[src]
  void add_col(std::size_t dst, std::size_t src, const Element& c) {
    if (field_.is_zero(c)) return;
    for (std::size_t i = 0; i < rows_; ++i)
      (*this)(i, dst) = field_.add((*this)(i, dst), field_.mul(c, (*this)(i, src)));
  }

 private:
  std::size_t rows_, cols_;
  F field_;
  std::vector<Element> data_;
};

/// Reduced row echelon form in place; returns pivot columns.
template <Field F>
std::vector<std::size_t> row_reduce(Matrix<F>& a) {
  const F& k = a.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && k.is_zero(a(p, c))) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(r, p);
    a.scale_row(r, k.inv(a(r, c)));
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (i != r && !k.is_zero(a(i, c))) a.add_row(i, r, k.neg(a(i, c)));
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <Field F>
std::size_t rank(Matrix<F> a) {
  return row_reduce(a).size();
}

template <Field F>
typename F::Element determinant(Matrix<F> a) {
  if (a.rows() != a.cols()) throw ArgumentError("determinant of a non-square matrix");
  const F& k = a.field();
  typename F::Element det = k.one();
  const std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && k.is_zero(a(p, c))) ++p;
    if (p == n) return k.zero();
    if (p != c) {
      a.swap_rows(p, c);
      det = k.neg(det);
    }
    det = k.mul(det, a(c, c));
    auto inv = k.inv(a(c, c));
    for (std::size_t i = c + 1; i < n; ++i)
      if (!k.is_zero(a(i, c))) a.add_row(i, c, k.neg(k.mul(a(i, c), inv)));
  }
  return det;
}

template <Field F>
Matrix<F> inverse(const Matrix<F>& a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw ArgumentError("inverse of a non-square matrix");
  Matrix<F> aug(n, 2 * n, a.field());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = a.field().one();
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw ArgumentError("matrix is singular");
  Matrix<F> inv(n, n, a.field());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Basis of the right kernel {v : a v = 0}, one vector per free column.
template <Field F>
std::vector<std::vector<typename F::Element>> kernel(Matrix<F> a) {
  const F& k = a.field();
  auto piv = row_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<std::vector<typename F::Element>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename F::Element> v(a.cols(), k.zero());
    v[free] = k.one();
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = k.neg(a(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace dcx
