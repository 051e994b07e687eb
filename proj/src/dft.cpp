#include "gdft/dft.hpp"

#include <cmath>

#include "gdft/errors.hpp"

namespace gdft {

double GroupAlgebraElement::norm1() const {
  double s = 0;
  for (const auto& v : coeffs) s += std::abs(v);
  return s;
}

void GroupAlgebraElement::rebuild_support() {
  std::vector<int> idx;
  for (int i = 0; i < int(coeffs.size()); ++i)
    if (coeffs[i] != cplx(0.0)) idx.push_back(i);
  support = std::move(idx);
}

BlockDiagonal BlockDiagonal::zeros_like(const IrrepSet& s) {
  BlockDiagonal out;
  out.blocks.reserve(s.irreps.size());
  for (const auto& r : s.irreps) out.blocks.emplace_back(r.dim, r.dim);
  return out;
}

double BlockDiagonal::max_block_residual(const BlockDiagonal& o) const {
  double worst = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    worst = std::max(worst, frob_dist(blocks[i], o.blocks[i]));
  return worst;
}

namespace {

void check_element(const GroupAlgebraElement& alpha, const IrrepSet& irreps) {
  if (alpha.group->order() != irreps.group->order() ||
      alpha.group->hash() != irreps.group->hash())
    throw Error("group algebra element and irrep set disagree on the group");
  if (int(alpha.coeffs.size()) != alpha.group->order())
    throw Error("coefficient vector has wrong length");
}

void accumulate_block(const GroupAlgebraElement& alpha, const Irrep& rho, Matrix& out,
                      OpCounter* c) {
  if (alpha.support) {
    for (int g : *alpha.support) axpy(out, alpha.coeffs[g], rho.mat[g], c);
  } else {
    for (int g = 0; g < int(alpha.coeffs.size()); ++g)
      axpy(out, alpha.coeffs[g], rho.mat[g], c);
  }
}

}  // namespace

BlockDiagonal naive_dft(const GroupAlgebraElement& alpha, const IrrepSet& irreps, OpCounter* c) {
  check_element(alpha, irreps);
  BlockDiagonal out = BlockDiagonal::zeros_like(irreps);
  const int k = irreps.count();
#pragma omp parallel for schedule(dynamic) if (k > 1)
  for (int i = 0; i < k; ++i) accumulate_block(alpha, irreps.irreps[i], out.blocks[i], c);
  return out;
}

BlockDiagonal naive_dft_serial(const GroupAlgebraElement& alpha, const IrrepSet& irreps,
                               OpCounter* c) {
  check_element(alpha, irreps);
  BlockDiagonal out = BlockDiagonal::zeros_like(irreps);
  for (int i = 0; i < irreps.count(); ++i)
    accumulate_block(alpha, irreps.irreps[i], out.blocks[i], c);
  return out;
}

GroupAlgebraElement inverse_dft(const BlockDiagonal& m, const IrrepSet& irreps, OpCounter* c) {
  const auto& g = irreps.group;
  const int n = g->order();
  if (m.blocks.size() != irreps.irreps.size()) throw Error("block count mismatch");
  for (std::size_t i = 0; i < m.blocks.size(); ++i)
    if (m.blocks[i].rows() != irreps.irreps[i].dim) throw Error("block dimension mismatch");
  GroupAlgebraElement out{g, std::vector<cplx>(n), std::nullopt};
  const double inv_n = 1.0 / double(n);
#pragma omp parallel for schedule(static) if (n > 64)
  for (int x = 0; x < n; ++x) {
    cplx acc = 0;
    std::uint64_t mul = 0, add = 0;
    const int xi = g->inv(x);
    for (const auto& rho : irreps.irreps) {
      const Matrix& rm = rho.mat[xi];
      const Matrix& mb = m.blocks[rho.id];
      cplx tr = 0;
      for (int i = 0; i < rho.dim; ++i)
        for (int j = 0; j < rho.dim; ++j) tr += rm(i, j) * mb(j, i);
      acc += double(rho.dim) * tr;
      mul += std::uint64_t(rho.dim) * rho.dim + 1;
      add += std::uint64_t(rho.dim) * rho.dim;
    }
    out.coeffs[x] = acc * inv_n;
    count_ops(c, mul + 1, add);
  }
  return out;
}

GroupAlgebraElement convolve(const GroupAlgebraElement& a, const GroupAlgebraElement& b,
                             OpCounter* c) {
  if (a.group->hash() != b.group->hash() || a.group->order() != b.group->order())
    throw Error("convolution operands live on different groups");
  const auto& g = a.group;
  const int n = g->order();
  GroupAlgebraElement out{g, std::vector<cplx>(n), std::nullopt};
#pragma omp parallel for schedule(static) if (n > 64)
  for (int x = 0; x < n; ++x) {
    cplx acc = 0;
    for (int h = 0; h < n; ++h) acc += a.coeffs[h] * b.coeffs[g->mult(g->inv(h), x)];
    out.coeffs[x] = acc;
    count_ops(c, std::uint64_t(n), std::uint64_t(n));
  }
  return out;
}

Matrix vec_kron_apply(const Matrix& a, const Matrix& b, const Matrix& c, OpCounter* counter) {
  if (a.cols() != b.rows() || b.cols() != c.rows()) throw Error("shape mismatch in A*B*C");
  const long long n1 = a.rows(), n2 = a.cols(), n3 = b.cols(), n4 = c.cols();
  const long long left_first = n1 * n2 * n3 + n1 * n3 * n4;
  const long long right_first = n2 * n3 * n4 + n1 * n2 * n4;
  if (left_first <= right_first) return matmul(matmul(a, b, counter), c, counter);
  return matmul(a, matmul(b, c, counter), counter);
}

GroupAlgebraElement random_alpha(const GroupPtr& g, std::uint64_t seed) {
  // splitmix64; fixed here so coefficient vectors are reproducible anywhere
  auto next = [state = seed + 0x9e3779b97f4a7c15ULL]() mutable {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  auto unit = [&]() { return double(next() >> 11) * 0x1.0p-52 - 1.0; };  // [-1, 1)
  GroupAlgebraElement out{g, std::vector<cplx>(g->order()), std::nullopt};
  for (auto& v : out.coeffs) {
    double re = unit();
    double im = unit();
    v = cplx(re, im);
  }
  return out;
}

BlockDiagonal block_multiply(const BlockDiagonal& l, const BlockDiagonal& r, OpCounter* c) {
  if (l.blocks.size() != r.blocks.size()) throw Error("block count mismatch");
  BlockDiagonal out;
  out.blocks.resize(l.blocks.size());
  for (std::size_t i = 0; i < l.blocks.size(); ++i)
    matmul_into(l.blocks[i], r.blocks[i], out.blocks[i], c);
  return out;
}

}  // namespace gdft
