#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gdft/dft.hpp"
#include "gdft/io.hpp"

using namespace gdft;

namespace {

// Independent oracle: same definition, summed in reverse element order.
BlockDiagonal reverse_order_dft(const GroupAlgebraElement& alpha, const IrrepSet& irreps) {
  BlockDiagonal out = BlockDiagonal::zeros_like(irreps);
  for (int i = 0; i < irreps.count(); ++i) {
    const Irrep& rho = irreps.irreps[i];
    for (int g = alpha.group->order() - 1; g >= 0; --g)
      for (int r = 0; r < rho.dim; ++r)
        for (int c = 0; c < rho.dim; ++c)
          out.blocks[i](r, c) += alpha.coeffs[g] * rho.mat[g](r, c);
  }
  return out;
}

GroupAlgebraElement delta(const GroupPtr& g, int at) {
  GroupAlgebraElement out{g, std::vector<cplx>(g->order()), std::nullopt};
  out.coeffs[at] = 1.0;
  out.rebuild_support();
  return out;
}

}  // namespace

TEST_CASE("transforms of delta vectors over C2") {
  auto c2 = group_from_named_family("cyclic", 2);
  auto irr = compute_irreps(c2);
  auto m1 = naive_dft(delta(c2, 0), irr);
  for (const auto& b : m1.blocks) CHECK(std::abs(b(0, 0) - cplx(1.0)) < 1e-14);
  auto m2 = naive_dft(delta(c2, 1), irr);
  // one block is +1 (trivial character), the other -1
  std::multiset<long> vals;
  for (const auto& b : m2.blocks) vals.insert(std::lround(b(0, 0).real()));
  CHECK(vals == std::multiset<long>{-1, 1});
}

TEST_CASE("naive transform matches an independent summation order") {
  for (const char* spec : {"symmetric:3", "dihedral:5", "quaternion8"}) {
    auto g = group_from_cli(spec);
    auto irr = compute_irreps(g);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      auto alpha = random_alpha(g, seed);
      auto got = naive_dft(alpha, irr);
      auto expect = reverse_order_dft(alpha, irr);
      CHECK(got.max_block_residual(expect) < 1e-10);
    }
  }
}

TEST_CASE("inverse transform") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);

  // all-identity blocks invert to the delta at the identity
  BlockDiagonal ident;
  for (const auto& r : irr.irreps) ident.blocks.push_back(Matrix::identity(r.dim));
  auto d = inverse_dft(ident, irr);
  CHECK(std::abs(d.coeffs[0] - cplx(1.0)) < 1e-12);
  for (int e = 1; e < s3->order(); ++e) CHECK(std::abs(d.coeffs[e]) < 1e-12);

  // round trips across assorted groups
  for (const char* spec : {"symmetric:3", "dihedral:8", "quaternion8", "cyclic:16", "sl2:5"}) {
    auto g = group_from_cli(spec);
    auto ir = compute_irreps(g);
    auto alpha = random_alpha(g, 11);
    auto back = inverse_dft(naive_dft(alpha, ir), ir);
    double worst = 0;
    for (int e = 0; e < g->order(); ++e)
      worst = std::max(worst, std::abs(back.coeffs[e] - alpha.coeffs[e]));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("inverse of a single character block over C3") {
  auto c3 = group_from_named_family("cyclic", 3);
  auto irr = compute_irreps(c3);
  const cplx omega = std::exp(cplx(0, 2.0 * std::numbers::pi / 3.0));
  int which = -1;
  for (int i = 0; i < 3; ++i)
    if (std::abs(irr.irreps[i].character(1) - omega) < 1e-9) which = i;
  REQUIRE(which >= 0);
  BlockDiagonal m = BlockDiagonal::zeros_like(irr);
  m.blocks[which](0, 0) = 1.0;
  auto alpha = inverse_dft(m, irr);
  for (int n = 0; n < 3; ++n) {
    cplx expect = std::conj(std::pow(omega, n)) / 3.0;
    CHECK(std::abs(alpha.coeffs[n] - expect) < 1e-12);
  }
  // and forward again
  CHECK(naive_dft(alpha, irr).max_block_residual(m) < 1e-12);
}

TEST_CASE("convolution") {
  auto s3 = group_from_named_family("symmetric", 3);
  auto irr = compute_irreps(s3);

  auto beta = random_alpha(s3, 3);
  auto conv = convolve(delta(s3, 0), beta);
  for (int e = 0; e < 6; ++e) CHECK(std::abs(conv.coeffs[e] - beta.coeffs[e]) < 1e-14);

  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      auto d = convolve(delta(s3, a), delta(s3, b));
      for (int e = 0; e < 6; ++e)
        CHECK(std::abs(d.coeffs[e] - (e == s3->mult(a, b) ? 1.0 : 0.0)) < 1e-14);
    }

  // convolution theorem, blockwise
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto a = random_alpha(s3, seed * 2);
    auto b = random_alpha(s3, seed * 2 + 1);
    auto lhs = naive_dft(convolve(a, b), irr);
    auto rhs = block_multiply(naive_dft(a, irr), naive_dft(b, irr), nullptr);
    CHECK(lhs.max_block_residual(rhs) < 1e-9);
  }
}

TEST_CASE("triple product via the cheaper association order") {
  auto id = Matrix::identity(3);
  Matrix b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = cplx(i + 1, j - 1);
  auto out = vec_kron_apply(id, b, id);
  CHECK(max_abs_diff(out, b) == 0.0);

  // the Kronecker identity vec(ABC) = (A (x) C^T) vec(B), random shapes
  std::uint64_t seed = 9;
  auto rnd = [&seed]() {
    seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    return double(seed >> 40) / double(1 << 24) - 0.5;
  };
  for (auto [n1, n2, n3, n4] :
       {std::array<int, 4>{2, 2, 2, 2}, {3, 4, 2, 5}, {1, 3, 3, 1}, {5, 2, 6, 3}, {16, 3, 4, 16}}) {
    Matrix a(n1, n2), bb(n2, n3), c(n3, n4);
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = cplx(rnd(), rnd());
    for (std::size_t i = 0; i < bb.size(); ++i) bb.data()[i] = cplx(rnd(), rnd());
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] = cplx(rnd(), rnd());
    Matrix direct = vec_kron_apply(a, bb, c);
    Matrix kr = kron(a, transpose(c));
    auto vb = vec_rows(bb);
    std::vector<cplx> vout(std::size_t(n1) * n4, 0.0);
    for (int i = 0; i < n1 * n4; ++i)
      for (int j = 0; j < n2 * n3; ++j) vout[i] += kr(i, j) * vb[j];
    Matrix via_vec = unvec_rows(vout, n1, n4);
    CHECK(max_abs_diff(direct, via_vec) < 1e-12);
  }

  // degenerate row x column shapes give the scalar bilinear form
  Matrix row(1, 3), col(3, 1), mid(3, 3);
  for (int i = 0; i < 3; ++i) {
    row(0, i) = i + 1;
    col(i, 0) = i - 1;
    for (int j = 0; j < 3; ++j) mid(i, j) = (i == j) ? 1.0 : 0.0;
  }
  auto scalar = vec_kron_apply(row, mid, col);
  CHECK(scalar.rows() == 1);
  CHECK(scalar.cols() == 1);
  // (1,2,3) . (-1,0,1) = 2
  CHECK(std::abs(scalar(0, 0) - cplx(2.0)) < 1e-14);
}

TEST_CASE("operation counting") {
  auto c16 = group_from_named_family("cyclic", 16);
  auto irr = compute_irreps(c16);
  auto alpha = random_alpha(c16, 1);

  OpCounter counter;
  naive_dft(alpha, irr, &counter);
  // dense input: exactly |G| * sum dim^2 multiplies and adds
  CHECK(counter.cmul() == std::uint64_t(16) * 16);
  CHECK(counter.cadd() == std::uint64_t(16) * 16);
  CHECK(counter.cmul() + counter.cadd() <= 8ull * 16 * 16 + 8ull * 16);

  // support-aware skipping counts less
  auto sparse = delta(c16, 3);
  OpCounter c2;
  naive_dft(sparse, irr, &c2);
  CHECK(c2.cmul() == 16);

  // parallel and serial agree in bits and in counts
  auto s5 = group_from_named_family("symmetric", 5);
  auto irr5 = compute_irreps(s5);
  auto a5 = random_alpha(s5, 2);
  OpCounter cs, cp;
  auto serial = naive_dft_serial(a5, irr5, &cs);
  auto parallel = naive_dft(a5, irr5, &cp);
  CHECK(serial == parallel);
  CHECK(cs.cmul() == cp.cmul());
  CHECK(cs.cadd() == cp.cadd());
}

TEST_CASE("seeded coefficients are reproducible") {
  auto g = group_from_named_family("dihedral", 10);
  auto a = random_alpha(g, 42);
  auto b = random_alpha(g, 42);
  auto c = random_alpha(g, 43);
  CHECK(a.coeffs == b.coeffs);
  CHECK(a.coeffs != c.coeffs);
  for (const auto& v : a.coeffs) {
    CHECK(std::abs(v.real()) <= 1.0);
    CHECK(std::abs(v.imag()) <= 1.0);
  }
}
