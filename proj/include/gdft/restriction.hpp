#pragma once

#include "gdft/irreps.hpp"

namespace gdft {

/// Basis changes making every big irrep literally block-diagonal over the
/// small set on subgroup elements: basis_change * rho(h) * basis_change^* =
/// direct sum over layout of sigma(h), entrywise equal to the small set's
/// matrices.
struct RestrictionPlan {
  struct Slot {
    int small_id = 0;
    int row_offset = 0;
  };
  struct PerBig {
    std::vector<Slot> layout;  // small_id ascending, copies contiguous
    Matrix basis_change;       // unitary, dim(rho) x dim(rho)
    bool identity = false;     // exact identity (big == small group)
  };
  std::vector<PerBig> per_big;  // indexed by big irrep id
};

/// Isotypic-projector construction. `h.group` must be the group of `small`;
/// `h.to_parent` embeds it into big's group.
RestrictionPlan restriction_plan(const IrrepSet& big, const SubgroupGroup& h,
                                 const IrrepSet& small);

/// Conjugates every big irrep by its plan basis change, producing the set
/// in the adapted basis (unitary, same characters, same ids).
IrrepSet conjugate_by_plan(const IrrepSet& big, const RestrictionPlan& plan);

/// Max residual of basis_change * rho(h) * basis_change^* against the
/// block-diagonal layout, over all h; used by tests and internal checks.
double restriction_residual(const IrrepSet& big, const SubgroupGroup& h, const IrrepSet& small,
                            const RestrictionPlan& plan);

}  // namespace gdft
