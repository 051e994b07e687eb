#pragma once

#include <optional>

#include "gdft/irreps.hpp"
#include "gdft/kernels.hpp"

namespace gdft {

/// A vector of |G| complex coefficients, optionally with its sorted
/// nonzero-support index list.
struct GroupAlgebraElement {
  GroupPtr group;
  std::vector<cplx> coeffs;
  std::optional<std::vector<int>> support;

  double norm1() const;
  /// Rebuilds support as the exact index set of nonzero coefficients.
  void rebuild_support();
};

/// The transform output: one complex matrix per irrep, in the set's
/// canonical order.
struct BlockDiagonal {
  std::vector<Matrix> blocks;

  static BlockDiagonal zeros_like(const IrrepSet& s);
  /// Largest per-block Frobenius distance to another operand.
  double max_block_residual(const BlockDiagonal& o) const;
  bool operator==(const BlockDiagonal& o) const { return blocks == o.blocks; }
};

/// The defining sum: block rho = sum_g alpha_g rho(g). Skips zero
/// coefficients when support is present. Parallel over blocks; per-block
/// summation order is fixed, so output bits do not depend on thread count.
BlockDiagonal naive_dft(const GroupAlgebraElement& alpha, const IrrepSet& irreps,
                        OpCounter* c = nullptr);

/// Reference implementation without threading, kept for tests and the
/// kernel benchmark.
BlockDiagonal naive_dft_serial(const GroupAlgebraElement& alpha, const IrrepSet& irreps,
                               OpCounter* c = nullptr);

/// Fourier inversion: alpha_g = (1/|G|) sum_rho dim(rho) tr(rho(g^-1) M_rho).
GroupAlgebraElement inverse_dft(const BlockDiagonal& m, const IrrepSet& irreps,
                                OpCounter* c = nullptr);

/// (alpha * beta)_g = sum_h alpha_h beta_{h^-1 g}.
GroupAlgebraElement convolve(const GroupAlgebraElement& a, const GroupAlgebraElement& b,
                             OpCounter* c = nullptr);

/// A*B*C via the cheaper association order; tests exercise the
/// vec/Kronecker identity against it.
Matrix vec_kron_apply(const Matrix& a, const Matrix& b, const Matrix& c,
                      OpCounter* counter = nullptr);

/// Seeded dense coefficients in [-1,1]^2; generator is fixed so vectors are
/// portable across runs.
GroupAlgebraElement random_alpha(const GroupPtr& g, std::uint64_t seed);

/// Blockwise product (left * right), counted.
BlockDiagonal block_multiply(const BlockDiagonal& l, const BlockDiagonal& r, OpCounter* c);

}  // namespace gdft
