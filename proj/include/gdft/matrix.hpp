#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace gdft {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Value type; all transforms in this
/// library are small-block linear algebra over these.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  cplx& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  cplx* row(int i) { return a_.data() + std::size_t(i) * cols_; }
  const cplx* row(int i) const { return a_.data() + std::size_t(i) * cols_; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }
  std::size_t size() const { return a_.size(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cplx> a_;
};

inline Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

inline Matrix adjoint(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(j, i) = std::conj(m(i, j));
  return t;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const cplx s = a(i, j);
      if (s == cplx(0.0)) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = s * b(p, q);
    }
  return k;
}

/// Row-major flattening; pairs with the Kronecker identity
/// vec(A·B·C) = (A (x) C^T)·vec(B).
inline std::vector<cplx> vec_rows(const Matrix& m) {
  return std::vector<cplx>(m.data(), m.data() + m.size());
}

inline Matrix unvec_rows(const std::vector<cplx>& v, int rows, int cols) {
  assert(int(v.size()) == rows * cols);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < v.size(); ++i) m.data()[i] = v[i];
  return m;
}

inline void set_block(Matrix& dst, int r0, int c0, const Matrix& src) {
  for (int i = 0; i < src.rows(); ++i)
    for (int j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

inline Matrix get_block(const Matrix& src, int r0, int c0, int rows, int cols) {
  Matrix b(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = src(r0 + i, c0 + j);
  return b;
}

inline double frob_norm(const Matrix& m) {
  double s = 0;
  for (std::size_t i = 0; i < m.size(); ++i) s += std::norm(m.data()[i]);
  return std::sqrt(s);
}

inline double frob_dist(const Matrix& a, const Matrix& b) {
  assert(a.same_shape(b));
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a.data()[i] - b.data()[i]);
  return std::sqrt(s);
}

inline double max_abs(const Matrix& m) {
  double s = 0;
  for (std::size_t i = 0; i < m.size(); ++i) s = std::max(s, std::abs(m.data()[i]));
  return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  assert(a.same_shape(b));
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a.data()[i] - b.data()[i]));
  return s;
}

}  // namespace gdft
