#pragma once

#include "gdft/restriction.hpp"

namespace gdft {

/// Orbit bookkeeping for the restriction of irr(H) to a normal subgroup N:
/// orbits of the conjugation action on irr(N), and per H-irrep the orbit
/// index, common multiplicity e and common dimension d of its restriction.
struct CliffordData {
  std::vector<std::vector<int>> orbits;  // irr(N) ids, each sorted ascending
  struct SigmaInfo {
    int orbit = 0;
    int e = 0;
    int d = 0;
  };
  std::vector<SigmaInfo> sigma;            // indexed by irr(H) id
  std::vector<std::vector<int>> families;  // irr(H) ids per orbit (the S_l partition)

  int orbit_size(int sigma_id) const { return int(orbits[sigma[sigma_id].orbit].size()); }
  /// Rows of the rewrite block for sigma: dim/d = e * |orbit|.
  int block_rows(int sigma_id, int dim) const { return dim / sigma[sigma_id].d; }
};

/// Computes orbits by permuting irr(N) characters under conjugation and
/// reads e, d off the restriction plan. Validates the counting identity
/// sum over a family of dim(sigma)*e/d = |H/N| in exact integers, and that
/// no restriction mixes two orbits.
CliffordData clifford_data(const IrrepSet& irr_h, const SubgroupGroup& n, const IrrepSet& irr_n,
                           const RestrictionPlan& plan_hn);

/// irr(H) rebased so that sigma(n) is exactly I_e (x) (direct sum of the
/// orbit's irreps in ascending id order) for n in N, plus the reordered
/// plan and the Clifford bookkeeping for that basis.
struct CliffordAdapted {
  IrrepSet irr_h;
  RestrictionPlan plan;
  CliffordData cd;
};
CliffordAdapted clifford_adapt(const IrrepSet& irr_h, const SubgroupGroup& n,
                               const IrrepSet& irr_n);

}  // namespace gdft
