#include "gdft/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "gdft/errors.hpp"
#include "gdft/kernels.hpp"

namespace gdft {

CliffordData clifford_data(const IrrepSet& irr_h, const SubgroupGroup& n, const IrrepSet& irr_n,
                           const RestrictionPlan& plan_hn) {
  const auto& hgrp = irr_h.group;
  const int hn = hgrp->order();
  const int nn = n.group->order();
  const int nirr = irr_n.count();

  std::vector<std::vector<cplx>> chi(nirr);
  for (int i = 0; i < nirr; ++i) chi[i] = irr_n.character_vector(i);

  auto match_char = [&](const std::vector<cplx>& v) {
    for (int i = 0; i < nirr; ++i) {
      double md = 0;
      for (int e = 0; e < nn; ++e) md = std::max(md, std::abs(v[e] - chi[i][e]));
      if (md < 1e-6) return i;
    }
    throw NumericalError("conjugated character matches no irrep of N");
  };

  // orbits of the H-action (h.lambda)(m) = lambda(h m h^-1), via union-find
  std::vector<int> root(nirr);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) -> int {
    return root[x] == x ? x : root[x] = find(root[x]);
  };
  for (int h = 0; h < hn; ++h) {
    for (int i = 0; i < nirr; ++i) {
      std::vector<cplx> moved(nn);
      for (int e = 0; e < nn; ++e) {
        int conj = hgrp->conjugate(h, n.to_parent[e]);
        int back = conj < int(n.index_in_subgroup.size()) ? n.index_in_subgroup[conj] : -1;
        if (back < 0) throw Error("subgroup is not normal under conjugation");
        moved[e] = chi[i][back];
      }
      int j = match_char(moved);
      int a = find(i), b = find(j);
      if (a != b) root[a] = b;
    }
  }

  CliffordData cd;
  std::vector<int> orbit_of(nirr, -1);
  {
    std::vector<int> rep_to_orbit(nirr, -1);
    for (int i = 0; i < nirr; ++i) {
      int r = find(i);
      if (rep_to_orbit[r] < 0) {
        rep_to_orbit[r] = int(cd.orbits.size());
        cd.orbits.push_back({});
      }
      orbit_of[i] = rep_to_orbit[r];
      cd.orbits[orbit_of[i]].push_back(i);
    }
  }
  for (auto& o : cd.orbits) std::sort(o.begin(), o.end());
  std::sort(cd.orbits.begin(), cd.orbits.end());
  for (std::size_t o = 0; o < cd.orbits.size(); ++o)
    for (int id : cd.orbits[o]) orbit_of[id] = int(o);

  for (const auto& o : cd.orbits)
    for (int id : o)
      if (irr_n.irreps[id].dim != irr_n.irreps[o.front()].dim)
        throw NumericalError("orbit members differ in dimension");

  // read e, d, orbit index off the plan layouts
  cd.sigma.resize(irr_h.count());
  cd.families.assign(cd.orbits.size(), {});
  for (int s = 0; s < irr_h.count(); ++s) {
    const auto& layout = plan_hn.per_big[s].layout;
    if (layout.empty()) throw Error("empty restriction layout");
    std::vector<int> mult(nirr, 0);
    for (const auto& slot : layout) mult[slot.small_id]++;
    int orbit = orbit_of[layout.front().small_id];
    int e = mult[layout.front().small_id];
    for (int id = 0; id < nirr; ++id) {
      if (mult[id] == 0) continue;
      if (orbit_of[id] != orbit) throw NumericalError("restriction layout mixes two orbits");
      if (mult[id] != e) throw NumericalError("orbit multiplicities differ");
    }
    for (int id : cd.orbits[orbit])
      if (mult[id] != e) throw NumericalError("restriction misses an orbit member");
    cd.sigma[s] = {orbit, e, irr_n.irreps[layout.front().small_id].dim};
    int dim = irr_h.irreps[s].dim;
    if (dim != cd.sigma[s].d * e * int(cd.orbits[orbit].size()))
      throw NumericalError("Clifford dimension identity fails");
    cd.families[orbit].push_back(s);
  }

  // counting identity in exact integers: sum dim * e / d = |H/N| per family
  const int quot = hn / nn;
  for (std::size_t l = 0; l < cd.families.size(); ++l) {
    long long total = 0;
    for (int s : cd.families[l]) {
      long long num = 1LL * irr_h.irreps[s].dim * cd.sigma[s].e;
      if (num % cd.sigma[s].d != 0) throw NumericalError("dim*e not divisible by d");
      total += num / cd.sigma[s].d;
    }
    if (total != quot)
      throw NumericalError("family count " + std::to_string(total) + " != |H/N| " +
                           std::to_string(quot));
  }
  return cd;
}

CliffordAdapted clifford_adapt(const IrrepSet& irr_h, const SubgroupGroup& n,
                               const IrrepSet& irr_n) {
  RestrictionPlan plan = restriction_plan(irr_h, n, irr_n);
  CliffordData cd = clifford_data(irr_h, n, irr_n, plan);

  // Reorder each sigma's layout from copies-contiguous to round-robin over
  // the orbit, so sigma(m) = I_e (x) (direct sum of the orbit) for m in N.
  RestrictionPlan reordered;
  reordered.per_big.resize(plan.per_big.size());
  for (int s = 0; s < irr_h.count(); ++s) {
    const auto& info = cd.sigma[s];
    const auto& orbit = cd.orbits[info.orbit];
    const int osz = int(orbit.size());
    const int d = info.d;
    const int e = info.e;
    const int dim = irr_h.irreps[s].dim;
    // source offset of (orbit position k, copy t) = (k*e + t)*d
    // target offset of (copy t, orbit position k) = (t*osz + k)*d
    Matrix perm(dim, dim);
    auto& out = reordered.per_big[s];
    for (int t = 0; t < e; ++t)
      for (int k = 0; k < osz; ++k) {
        int src = (k * e + t) * d;
        int dst = (t * osz + k) * d;
        out.layout.push_back({orbit[k], dst});
        for (int c = 0; c < d; ++c) perm(dst + c, src + c) = 1.0;
      }
    std::sort(out.layout.begin(), out.layout.end(),
              [](const RestrictionPlan::Slot& a, const RestrictionPlan::Slot& b) {
                return a.row_offset < b.row_offset;
              });
    out.basis_change = matmul(perm, plan.per_big[s].basis_change);
    out.identity = false;
  }

  CliffordAdapted out;
  out.irr_h = conjugate_by_plan(irr_h, reordered);
  out.cd = cd;
  // relative to the adapted set the restriction basis change is the identity
  out.plan.per_big.resize(reordered.per_big.size());
  for (std::size_t s = 0; s < reordered.per_big.size(); ++s) {
    out.plan.per_big[s].layout = reordered.per_big[s].layout;
    out.plan.per_big[s].basis_change = Matrix::identity(irr_h.irreps[s].dim);
    out.plan.per_big[s].identity = true;
  }
  double res = restriction_residual(out.irr_h, n, irr_n, out.plan);
  if (res > 1e-8) throw NumericalError("adapted basis residual too large");
  return out;
}

}  // namespace gdft
