#include "gdft/restriction.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gdft/errors.hpp"
#include "gdft/kernels.hpp"

namespace gdft {

namespace {

// pi_kl = (d_sigma/|H|) sum_h conj(sigma(h)[k,l]) rho(h), as an Eigen matrix.
Eigen::MatrixXcd isotypic_unit(const Irrep& rho, const Irrep& sigma, const SubgroupGroup& h,
                               int k, int l) {
  const int dim = rho.dim;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int e = 0; e < h.group->order(); ++e) {
    const cplx w = std::conj(sigma.mat[e](k, l));
    if (w == cplx(0.0)) continue;
    const Matrix& r = rho.mat[h.to_parent[e]];
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) acc(i, j) += w * r(i, j);
  }
  acc *= double(sigma.dim) / double(h.group->order());
  return acc;
}

}  // namespace

RestrictionPlan restriction_plan(const IrrepSet& big, const SubgroupGroup& h,
                                 const IrrepSet& small) {
  RestrictionPlan plan;
  plan.per_big.resize(big.irreps.size());

  if (h.group->order() == big.group->order()) {
    // restriction to the whole group: identity plan
    for (std::size_t r = 0; r < big.irreps.size(); ++r) {
      auto& pb = plan.per_big[r];
      pb.layout = {{int(r), 0}};
      pb.basis_change = Matrix::identity(big.irreps[r].dim);
      pb.identity = true;
    }
    return plan;
  }

  const int hn = h.group->order();
  // restricted characters of big irreps
  std::vector<std::vector<cplx>> chi_small(small.irreps.size());
  for (std::size_t s = 0; s < small.irreps.size(); ++s) chi_small[s] = small.character_vector(int(s));

  for (std::size_t ri = 0; ri < big.irreps.size(); ++ri) {
    const Irrep& rho = big.irreps[ri];
    auto& pb = plan.per_big[ri];

    std::vector<cplx> chi_res(hn);
    for (int e = 0; e < hn; ++e) chi_res[e] = rho.character(h.to_parent[e]);

    std::vector<int> mult(small.irreps.size(), 0);
    int covered = 0;
    for (std::size_t s = 0; s < small.irreps.size(); ++s) {
      cplx ip = 0;
      for (int e = 0; e < hn; ++e) ip += chi_res[e] * std::conj(chi_small[s][e]);
      ip /= double(hn);
      long m = std::lround(ip.real());
      if (std::abs(ip - cplx(double(m))) > 1e-6)
        throw NumericalError("restriction multiplicity is not an integer");
      mult[s] = int(m);
      covered += mult[s] * small.irreps[s].dim;
    }
    if (covered != rho.dim) throw NumericalError("restriction multiplicities do not fill rho");

    // Columns of B transform like the small irreps; C = B^H.
    Eigen::MatrixXcd b(rho.dim, rho.dim);
    int col = 0;
    for (std::size_t s = 0; s < small.irreps.size(); ++s) {
      if (mult[s] == 0) continue;
      const Irrep& sigma = small.irreps[s];
      Eigen::MatrixXcd p11 = isotypic_unit(rho, sigma, h, 0, 0);
      // Hermitian projector of rank mult[s]; take its unit eigenvectors.
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(p11);
      if (es.info() != Eigen::Success) throw NumericalError("projector eigensolver failed");
      std::vector<int> picks;
      for (int i = 0; i < rho.dim; ++i)
        if (es.eigenvalues()(i) > 0.5) picks.push_back(i);
      if (int(picks.size()) != mult[s])
        throw NumericalError("projector rank disagrees with multiplicity");
      std::vector<Eigen::MatrixXcd> units(sigma.dim);
      for (int k = 0; k < sigma.dim; ++k) units[k] = isotypic_unit(rho, sigma, h, k, 0);
      for (int copy = 0; copy < mult[s]; ++copy) {
        Eigen::VectorXcd w = es.eigenvectors().col(picks[copy]);
        pb.layout.push_back({int(s), col});
        for (int k = 0; k < sigma.dim; ++k) b.col(col + k) = units[k] * w;
        col += sigma.dim;
      }
    }
    // unitarity of the assembled basis
    double unit_res = (b.adjoint() * b - Eigen::MatrixXcd::Identity(rho.dim, rho.dim)).norm();
    if (unit_res > 1e-8 * rho.dim) throw NumericalError("adapted basis is not unitary");

    Eigen::MatrixXcd c = b.adjoint();
    pb.basis_change = Matrix(rho.dim, rho.dim);
    for (int i = 0; i < rho.dim; ++i)
      for (int j = 0; j < rho.dim; ++j) pb.basis_change(i, j) = c(i, j);
  }

  double res = restriction_residual(big, h, small, plan);
  if (res > 1e-7) throw NumericalError("restriction block residual too large");
  return plan;
}

double restriction_residual(const IrrepSet& big, const SubgroupGroup& h, const IrrepSet& small,
                            const RestrictionPlan& plan) {
  double worst = 0;
  for (std::size_t ri = 0; ri < big.irreps.size(); ++ri) {
    const Irrep& rho = big.irreps[ri];
    const auto& pb = plan.per_big[ri];
    for (int e = 0; e < h.group->order(); ++e) {
      Matrix lhs = matmul(matmul(pb.basis_change, rho.mat[h.to_parent[e]]),
                          adjoint(pb.basis_change));
      Matrix rhs(rho.dim, rho.dim);
      for (const auto& slot : pb.layout)
        set_block(rhs, slot.row_offset, slot.row_offset, small.irreps[slot.small_id].mat[e]);
      worst = std::max(worst, max_abs_diff(lhs, rhs));
    }
  }
  return worst;
}

IrrepSet conjugate_by_plan(const IrrepSet& big, const RestrictionPlan& plan) {
  IrrepSet out{big.group, {}};
  out.irreps.reserve(big.irreps.size());
  for (std::size_t ri = 0; ri < big.irreps.size(); ++ri) {
    const Irrep& rho = big.irreps[ri];
    const auto& pb = plan.per_big[ri];
    Irrep r;
    r.id = rho.id;
    r.dim = rho.dim;
    r.mat.reserve(rho.mat.size());
    if (pb.identity) {
      r.mat = rho.mat;
    } else {
      Matrix ch = adjoint(pb.basis_change);
      for (const auto& m : rho.mat) r.mat.push_back(matmul(matmul(pb.basis_change, m), ch));
    }
    out.irreps.push_back(std::move(r));
  }
  return out;
}

}  // namespace gdft
