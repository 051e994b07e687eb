#pragma once

#include "gdft/matrix.hpp"
#include "gdft/opcount.hpp"

namespace gdft {

// Counted dense kernels. The OpenMP variants partition output entries across
// threads; every entry keeps its serial summation order, so results are
// bit-identical to the *_serial references at any thread count.

/// Serial reference product, kept for tests and the kernel benchmark.
void matmul_serial(const Matrix& a, const Matrix& b, Matrix& out);

/// out = a*b. Counts a.rows*b.cols*inner multiplies and
/// a.rows*b.cols*(inner-1) adds.
void matmul_into(const Matrix& a, const Matrix& b, Matrix& out, OpCounter* c = nullptr);
Matrix matmul(const Matrix& a, const Matrix& b, OpCounter* c = nullptr);

/// acc += a*b. Counts m*n*k multiplies and m*n*k adds.
void matmul_acc(const Matrix& a, const Matrix& b, Matrix& acc, OpCounter* c = nullptr);

/// acc += s*x (entrywise).
void axpy(Matrix& acc, cplx s, const Matrix& x, OpCounter* c = nullptr);

/// acc += x.
void add_into(Matrix& acc, const Matrix& x, OpCounter* c = nullptr);

/// Rows [r0, r0+block.rows) of acc += block * dense[r0.., :].
/// The workhorse of block-diagonal times dense products.
void block_row_mult_acc(const Matrix& block, const Matrix& dense, int r0, Matrix& acc,
                        OpCounter* c = nullptr);

}  // namespace gdft
