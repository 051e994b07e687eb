#include "gdft/kernels.hpp"

#include <cassert>

namespace gdft {

namespace {
// Below this many scalar products a parallel region costs more than it saves.
constexpr long long kParallelCutoff = 1 << 15;

inline cplx dot_row_col(const Matrix& a, const Matrix& b, int i, int j) {
  const int k = a.cols();
  cplx s = 0.0;
  const cplx* ar = a.row(i);
  for (int t = 0; t < k; ++t) s += ar[t] * b(t, j);
  return s;
}
}  // namespace

void matmul_serial(const Matrix& a, const Matrix& b, Matrix& out) {
  assert(a.cols() == b.rows());
  out = Matrix(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) out(i, j) = dot_row_col(a, b, i, j);
}

void matmul_into(const Matrix& a, const Matrix& b, Matrix& out, OpCounter* c) {
  assert(a.cols() == b.rows());
  const int m = a.rows(), n = b.cols(), k = a.cols();
  out = Matrix(m, n);
  const long long work = 1LL * m * n * k;
#pragma omp parallel for schedule(static) if (work >= kParallelCutoff)
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = dot_row_col(a, b, i, j);
  if (k > 0) count_ops(c, std::uint64_t(work), std::uint64_t(1LL * m * n * (k - 1)));
}

Matrix matmul(const Matrix& a, const Matrix& b, OpCounter* c) {
  Matrix out;
  matmul_into(a, b, out, c);
  return out;
}

void matmul_acc(const Matrix& a, const Matrix& b, Matrix& acc, OpCounter* c) {
  assert(a.cols() == b.rows());
  assert(acc.rows() == a.rows() && acc.cols() == b.cols());
  const int m = a.rows(), n = b.cols(), k = a.cols();
  const long long work = 1LL * m * n * k;
#pragma omp parallel for schedule(static) if (work >= kParallelCutoff)
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) acc(i, j) += dot_row_col(a, b, i, j);
  count_ops(c, std::uint64_t(work), std::uint64_t(work));
}

void axpy(Matrix& acc, cplx s, const Matrix& x, OpCounter* c) {
  assert(acc.same_shape(x));
  const std::size_t n = acc.size();
  cplx* ap = acc.data();
  const cplx* xp = x.data();
  for (std::size_t i = 0; i < n; ++i) ap[i] += s * xp[i];
  count_ops(c, n, n);
}

void add_into(Matrix& acc, const Matrix& x, OpCounter* c) {
  assert(acc.same_shape(x));
  const std::size_t n = acc.size();
  cplx* ap = acc.data();
  const cplx* xp = x.data();
  for (std::size_t i = 0; i < n; ++i) ap[i] += xp[i];
  count_ops(c, 0, n);
}

void block_row_mult_acc(const Matrix& block, const Matrix& dense, int r0, Matrix& acc,
                        OpCounter* c) {
  const int d = block.rows();
  assert(block.cols() == d);
  assert(acc.cols() == dense.cols());
  const int n = dense.cols();
  for (int i = 0; i < d; ++i) {
    cplx* out = acc.row(r0 + i);
    for (int t = 0; t < d; ++t) {
      const cplx s = block(i, t);
      const cplx* src = dense.row(r0 + t);
      for (int j = 0; j < n; ++j) out[j] += s * src[j];
    }
  }
  count_ops(c, std::uint64_t(1LL * d * d * n), std::uint64_t(1LL * d * d * n));
}

}  // namespace gdft
