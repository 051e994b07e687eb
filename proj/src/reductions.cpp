#include "gdft/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <set>

#include "gdft/errors.hpp"

namespace gdft {

namespace {

int ceil_log2(int x) {
  int i = 0;
  while ((1 << i) < x) ++i;
  return i;
}

Subgroup map_into(const SubgroupGroup& big, const Subgroup& sub_of_parent) {
  std::vector<int> mapped;
  mapped.reserve(sub_of_parent.elements.size());
  for (int e : sub_of_parent.elements) {
    int idx = big.index_in_subgroup[e];
    if (idx < 0) throw Error("subgroup is not contained where expected");
    mapped.push_back(idx);
  }
  std::sort(mapped.begin(), mapped.end());
  return {big.group, std::move(mapped)};
}

// Copies the small blocks of s onto the diagonal slots of acc (free in the
// arithmetic model); used when a coset term initializes the accumulator.
void lift_copy(const RestrictionPlan::PerBig& pb, const BlockDiagonal& s, Matrix& acc) {
  for (const auto& slot : pb.layout)
    set_block(acc, slot.row_offset, slot.row_offset, s.blocks[slot.small_id]);
}

// acc += blockdiag(s per layout) * dense, via the row-band kernel.
void lift_mult_acc(const RestrictionPlan::PerBig& pb, const BlockDiagonal& s,
                   const Matrix& dense, Matrix& acc, OpCounter* c) {
  for (const auto& slot : pb.layout)
    block_row_mult_acc(s.blocks[slot.small_id], dense, slot.row_offset, acc, c);
}

// acc += blockdiag(s) entries on the diagonal slots.
void lift_add(const RestrictionPlan::PerBig& pb, const BlockDiagonal& s, Matrix& acc,
              OpCounter* c) {
  for (const auto& slot : pb.layout) {
    const Matrix& b = s.blocks[slot.small_id];
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j)
        acc(slot.row_offset + i, slot.row_offset + j) += b(i, j);
    count_ops(c, 0, std::uint64_t(b.rows()) * b.cols());
  }
}

BlockDiagonal conjugate_back(const RestrictionPlan& plan, const IrrepSet& big,
                             std::vector<Matrix>&& acc, OpCounter* c) {
  BlockDiagonal out;
  out.blocks.resize(acc.size());
  for (std::size_t r = 0; r < acc.size(); ++r) {
    const auto& pb = plan.per_big[r];
    if (pb.identity) {
      out.blocks[r] = std::move(acc[r]);
    } else {
      out.blocks[r] = matmul(matmul(adjoint(pb.basis_change), acc[r], c), pb.basis_change, c);
    }
  }
  (void)big;
  return out;
}

GroupAlgebraElement restrict_to_coset(const GroupAlgebraElement& alpha, const SubgroupGroup& h,
                                      int right_translate) {
  GroupAlgebraElement out{h.group, std::vector<cplx>(h.group->order()), std::nullopt};
  const auto& g = alpha.group;
  for (int e = 0; e < h.group->order(); ++e)
    out.coeffs[e] = alpha.coeffs[g->mult(h.to_parent[e], right_translate)];
  out.rebuild_support();
  return out;
}

bool coset_has_support(const GroupAlgebraElement& alpha, const SubgroupGroup& h,
                       int right_translate) {
  const auto& g = alpha.group;
  for (int e = 0; e < h.group->order(); ++e)
    if (alpha.coeffs[g->mult(h.to_parent[e], right_translate)] != cplx(0.0)) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// single-subgroup

SingleSubgroupPlan build_single_plan(const IrrepSet& big, const Subgroup& h,
                                     std::shared_ptr<const IrrepSet> irr_h) {
  SingleSubgroupPlan sp;
  sp.h_sub = h;
  sp.h = subgroup_as_group(h);
  sp.irr_h = std::move(irr_h);
  sp.plan = restriction_plan(big, sp.h, *sp.irr_h);
  sp.coset_x = coset_reps(big.group, h, CosetSide::Right);
  sp.rho_adapted.resize(sp.coset_x.size());
  for (std::size_t xi = 1; xi < sp.coset_x.size(); ++xi) {
    BlockDiagonal bd;
    bd.blocks.reserve(big.irreps.size());
    for (std::size_t r = 0; r < big.irreps.size(); ++r) {
      const auto& pb = sp.plan.per_big[r];
      const Matrix& rho_x = big.irreps[r].mat[sp.coset_x[xi]];
      if (pb.identity)
        bd.blocks.push_back(rho_x);
      else
        bd.blocks.push_back(
            matmul(matmul(pb.basis_change, rho_x), adjoint(pb.basis_change)));
    }
    sp.rho_adapted[xi] = std::move(bd);
  }
  return sp;
}

BlockDiagonal single_subgroup_dft(const GroupAlgebraElement& alpha, const IrrepSet& big,
                                  const SingleSubgroupPlan& sp, const DftCallback& recurse,
                                  OpCounter* c) {
  std::vector<Matrix> acc(big.irreps.size());
  for (std::size_t r = 0; r < big.irreps.size(); ++r)
    acc[r] = Matrix(big.irreps[r].dim, big.irreps[r].dim);

  for (std::size_t xi = 0; xi < sp.coset_x.size(); ++xi) {
    const int x = sp.coset_x[xi];
    if (!coset_has_support(alpha, sp.h, x)) continue;
    BlockDiagonal s = recurse(restrict_to_coset(alpha, sp.h, x));
    for (std::size_t r = 0; r < big.irreps.size(); ++r) {
      const auto& pb = sp.plan.per_big[r];
      if (x == 0)
        lift_copy(pb, s, acc[r]);  // identity translate: copy only
      else
        lift_mult_acc(pb, s, sp.rho_adapted[xi].blocks[r], acc[r], c);
    }
  }
  return conjugate_back(sp.plan, big, std::move(acc), c);
}

// ---------------------------------------------------------------------------
// prime-index

PrimeIndexPlan build_prime_plan(const IrrepSet& big, const Subgroup& n,
                                std::shared_ptr<const IrrepSet> irr_n) {
  const auto& g = big.group;
  PrimeIndexPlan pp;
  pp.p = g->order() / n.order();
  auto prime = [](int v) {
    if (v < 2) return false;
    for (int d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  };
  if (!prime(pp.p)) throw CapError("subgroup index is not prime");
  if (!is_normal(n)) throw CapError("subgroup is not normal");
  pp.n_sub = n;
  pp.n = subgroup_as_group(n);
  pp.irr_n = std::move(irr_n);
  pp.plan = restriction_plan(big, pp.n, *pp.irr_n);

  for (int t = 1; t < g->order(); ++t)
    if (!n.contains(t)) {
      pp.t = t;
      break;
    }
  pp.powers.resize(pp.p);
  std::vector<char> covered(g->order(), 0);
  for (int j = 0; j < pp.p; ++j) {
    pp.powers[j] = g->power(pp.t, j);
    for (int s : n.elements) {
      int e = g->mult(s, pp.powers[j]);
      if (covered[e]) throw Error("coset powers overlap");
      covered[e] = 1;
    }
  }

  pp.rho_t.blocks.reserve(big.irreps.size());
  for (std::size_t r = 0; r < big.irreps.size(); ++r) {
    const auto& pb = pp.plan.per_big[r];
    const Matrix& rho_t = big.irreps[r].mat[pp.t];
    pp.rho_t.blocks.push_back(
        pb.identity ? rho_t : matmul(matmul(pb.basis_change, rho_t), adjoint(pb.basis_change)));
  }
  return pp;
}

BlockDiagonal prime_index_dft(const GroupAlgebraElement& alpha, const IrrepSet& big,
                              const PrimeIndexPlan& pp, const DftCallback& recurse,
                              OpCounter* c) {
  // N-DFT per coset N t^j, highest contributing power first (Horner)
  std::vector<std::optional<BlockDiagonal>> s(pp.p);
  int jmax = -1;
  for (int j = 0; j < pp.p; ++j) {
    if (!coset_has_support(alpha, pp.n, pp.powers[j])) continue;
    s[j] = recurse(restrict_to_coset(alpha, pp.n, pp.powers[j]));
    jmax = j;
  }
  std::vector<Matrix> acc(big.irreps.size());
  for (std::size_t r = 0; r < big.irreps.size(); ++r)
    acc[r] = Matrix(big.irreps[r].dim, big.irreps[r].dim);
  if (jmax >= 0) {
    for (std::size_t r = 0; r < big.irreps.size(); ++r)
      lift_copy(pp.plan.per_big[r], *s[jmax], acc[r]);
    for (int j = jmax - 1; j >= 0; --j) {
      for (std::size_t r = 0; r < big.irreps.size(); ++r) {
        acc[r] = matmul(acc[r], pp.rho_t.blocks[r], c);
        if (s[j]) lift_add(pp.plan.per_big[r], *s[j], acc[r], c);
      }
    }
  }
  return conjugate_back(pp.plan, big, std::move(acc), c);
}

// ---------------------------------------------------------------------------
// target format and labeling

int TargetFormat::num_blocks() const {
  int t = 0;
  for (int c : level_counts) t += c;
  return t;
}

int TargetFormat::block_level(int block) const {
  for (int i = 0; i < levels(); ++i) {
    if (block < level_counts[i]) return i;
    block -= level_counts[i];
  }
  throw Error("block index out of range");
}

int TargetFormat::level_base(int level) const {
  int b = 0;
  for (int i = 0; i < level; ++i) b += level_counts[i];
  return b;
}

long long TargetFormat::total_entries() const {
  long long r = 0;
  for (int i = 0; i < levels(); ++i) r += 1LL * level_counts[i] * block_size(i) * block_size(i);
  return r;
}

TargetFormat build_target_format(int m) {
  if (m < 1) throw Error("target format needs m >= 1");
  TargetFormat fmt;
  fmt.m = m;
  const int imax = ceil_log2(m);
  for (int i = 0; i < imax; ++i) fmt.level_counts.push_back((2 * m + (1 << (2 * i)) - 1) >> (2 * i));
  fmt.level_counts.push_back(2);
  // every level offers at least 2m/2^i columns
  for (int i = 0; i <= imax; ++i) {
    long long cols = 1LL * fmt.level_counts[i] * fmt.block_size(i);
    if (cols * (1 << i) < 2 * m) throw Error("target format level too small");
  }
  return fmt;
}

int Labeling::coord_index(int block, int row, int col) const {
  Coord key{block, row, col};
  auto it = std::lower_bound(used.begin(), used.end(), key);
  if (it == used.end() || !(*it == key)) return -1;
  return int(it - used.begin());
}

Labeling build_labeling(const CliffordData& cd, const TargetFormat& fmt, const IrrepSet& irr_h) {
  Labeling lab;
  lab.fmt = fmt;
  lab.height.resize(irr_h.count());
  lab.column_of.resize(irr_h.count());
  std::set<Coord> coords;
  std::vector<std::vector<Labeling::Source>> src_map;
  std::vector<Coord> order;

  for (std::size_t l = 0; l < cd.families.size(); ++l) {
    std::vector<int> cursor(fmt.levels(), 0);  // fresh per family: labels shared across them
    std::set<std::pair<int, int>> taken;       // injectivity within the family
    for (int sigma : cd.families[l]) {
      const int d = cd.sigma[sigma].d;
      const int e = cd.sigma[sigma].e;
      const int w = irr_h.irreps[sigma].dim / d;
      lab.height[sigma] = w;
      const int level = ceil_log2(w);
      if (!((1 << level) / 2 < w && w <= (1 << level)))
        throw Error("column height does not fit its level");
      const int width = fmt.block_size(level);
      lab.column_of[sigma].resize(e);
      for (int j = 0; j < e; ++j) {
        int q = cursor[level]++;
        if (q >= fmt.level_counts[level] * width)
          throw Error("no free target column at the required level");
        int block = fmt.level_base(level) + q / width;
        int col = q % width;
        if (!taken.emplace(block, col).second)
          throw Error("target column reused within one family");
        lab.column_of[sigma][j] = {block, col};
        for (int i = 0; i < w; ++i) coords.insert({block, i, col});
      }
    }
  }
  lab.used.assign(coords.begin(), coords.end());
  lab.sources.resize(lab.used.size());
  for (std::size_t l = 0; l < cd.families.size(); ++l)
    for (int sigma : cd.families[l]) {
      const int w = lab.height[sigma];
      for (int j = 0; j < int(lab.column_of[sigma].size()); ++j) {
        auto [block, col] = lab.column_of[sigma][j];
        for (int i = 0; i < w; ++i)
          lab.sources[lab.coord_index(block, i, col)].push_back({sigma, i, j});
      }
    }
  return lab;
}

// ---------------------------------------------------------------------------
// sparse rewrite

std::vector<ParentMatrix> sparse_rewrite(const BlockDiagonal& m, const CliffordData& cd,
                                         const Labeling& lab, const IrrepSet& irr_n,
                                         const IrrepSet& irr_h_adapted, OpCounter* c,
                                         bool check, int* inverse_dfts) {
  const int nn = irr_n.group->order();
  const auto& fmt = lab.fmt;
  std::vector<ParentMatrix> out(nn);
  for (int n = 0; n < nn; ++n) {
    out[n].blocks.reserve(fmt.num_blocks());
    for (int b = 0; b < fmt.num_blocks(); ++b) {
      int sz = fmt.block_size(fmt.block_level(b));
      out[n].blocks.emplace_back(sz, sz);
    }
  }
  int inv_count = 0;
  for (std::size_t a = 0; a < lab.used.size(); ++a) {
    BlockDiagonal gathered = BlockDiagonal::zeros_like(irr_n);
    bool any = false;
    for (const auto& src : lab.sources[a]) {
      const int d = cd.sigma[src.sigma].d;
      const auto& orbit = cd.orbits[cd.sigma[src.sigma].orbit];
      const Matrix& msig = m.blocks[src.sigma];
      const int osz = int(orbit.size());
      for (int k = 0; k < osz; ++k) {
        Matrix blk = get_block(msig, src.i * d, (src.j * osz + k) * d, d, d);
        if (max_abs(blk) != 0.0) any = true;
        gathered.blocks[orbit[k]] = std::move(blk);
      }
    }
    const auto& coord = lab.used[a];
    if (!any) continue;  // zero data: parent entries stay zero
    GroupAlgebraElement coeffs = inverse_dft(gathered, irr_n, c);
    ++inv_count;
    for (int n = 0; n < nn; ++n)
      out[n].blocks[coord.block](coord.row, coord.col) = coeffs.coeffs[n];
  }
  if (inverse_dfts) *inverse_dfts = inv_count;

  if (check) {
    // reconstruction: M_hat[(i*d+r), ((j*|O|+k)*d+c)] = sum_n M_n[i,j] lambda_k(n)[r,c]
    double worst = 0;
    for (int sigma = 0; sigma < irr_h_adapted.count(); ++sigma) {
      const int d = cd.sigma[sigma].d;
      const int e = cd.sigma[sigma].e;
      const auto& orbit = cd.orbits[cd.sigma[sigma].orbit];
      const int osz = int(orbit.size());
      const int w = lab.height[sigma];
      const Matrix& msig = m.blocks[sigma];
      for (int i = 0; i < w; ++i)
        for (int j = 0; j < e; ++j) {
          auto [block, col] = lab.column_of[sigma][j];
          for (int k = 0; k < osz; ++k) {
            const Irrep& lambda = irr_n.irreps[orbit[k]];
            for (int r = 0; r < d; ++r)
              for (int cc = 0; cc < d; ++cc) {
                cplx s = 0;
                for (int n = 0; n < nn; ++n)
                  s += out[n].blocks[block](i, col) * lambda.mat[n](r, cc);
                worst = std::max(worst,
                                 std::abs(s - msig(i * d + r, (j * osz + k) * d + cc)));
              }
          }
        }
    }
    if (worst > 1e-6)
      throw NumericalError("sparse rewrite reconstruction residual " + std::to_string(worst));
  }
  return out;
}

// ---------------------------------------------------------------------------
// triple plan construction

namespace {

// J^sigma = (I_d | I_d | ... | I_d), d x d*osz
Matrix make_j(int d, int osz) {
  Matrix j(d, d * osz);
  for (int k = 0; k < osz; ++k)
    for (int r = 0; r < d; ++r) j(r, k * d + r) = 1.0;
  return j;
}

void probe_lift_plan(const TriplePlan& tp, const IrrepSet& big);

}  // namespace

TriplePlan build_triple_plan(const IrrepSet& big, const Subgroup& n, const Subgroup& h,
                             const Subgroup& k, std::shared_ptr<const IrrepSet> irr_n,
                             std::shared_ptr<const IrrepSet> irr_h_adapted,
                             std::shared_ptr<const IrrepSet> irr_k, const CliffordData& cd,
                             const RestrictionPlan& plan_hn) {
  const auto& g = big.group;
  if (h.order() >= g->order() || k.order() >= g->order())
    throw CapError("triple reduction needs proper subgroups");
  if (!is_normal(n)) throw CapError("intersection subgroup is not normal");
  {
    std::vector<int> meet;
    std::set_intersection(h.elements.begin(), h.elements.end(), k.elements.begin(),
                          k.elements.end(), std::back_inserter(meet));
    if (meet != n.elements) throw CapError("H and K do not intersect exactly in N");
  }

  TriplePlan tp;
  tp.n_sub = n;
  tp.h_sub = h;
  tp.k_sub = k;
  tp.n = subgroup_as_group(n);
  tp.h = subgroup_as_group(h);
  tp.k = subgroup_as_group(k);
  tp.irr_n = std::move(irr_n);
  tp.irr_h = std::move(irr_h_adapted);
  tp.irr_k = std::move(irr_k);
  tp.cd = cd;
  tp.plan_hn = plan_hn;
  tp.fmt = build_target_format(h.order() / n.order());
  tp.lab = build_labeling(cd, tp.fmt, *tp.irr_h);
  tp.r = tp.fmt.total_entries();
  tp.plan_gh = restriction_plan(big, tp.h, *tp.irr_h);
  tp.plan_gk = restriction_plan(big, tp.k, *tp.irr_k);

  // element maps
  tp.n_to_h.resize(n.order());
  tp.n_to_k.resize(n.order());
  for (int i = 0; i < n.order(); ++i) {
    tp.n_to_h[i] = tp.h.index_in_subgroup[n.elements[i]];
    tp.n_to_k[i] = tp.k.index_in_subgroup[n.elements[i]];
    if (tp.n_to_h[i] < 0 || tp.n_to_k[i] < 0) throw Error("N does not embed into H and K");
  }
  Subgroup n_in_k{tp.k.group, {}};
  for (int i = 0; i < n.order(); ++i) n_in_k.elements.push_back(tp.n_to_k[i]);
  std::sort(n_in_k.elements.begin(), n_in_k.elements.end());
  tp.y_reps = coset_reps(tp.k.group, n_in_k, CosetSide::Right);

  tp.hk = product_set(g, h.elements, k.elements);
  if (std::ssize(tp.hk) != 1LL * h.order() * k.order() / n.order())
    throw Error("HK does not factor with uniqueness of expression");
  tp.cover = translate_cover(g, tp.hk);
  tp.rho_cover.resize(tp.cover.size());
  for (std::size_t t = 0; t < tp.cover.size(); ++t) {
    if (tp.cover[t] == 0) continue;
    BlockDiagonal bd;
    for (const auto& rho : big.irreps) bd.blocks.push_back(rho.mat[tp.cover[t]]);
    tp.rho_cover[t] = std::move(bd);
  }

  // ---- the lift plan ----
  auto& lp = tp.lift;
  lp.s_mat.resize(big.irreps.size());
  lp.t_inv.resize(big.irreps.size());
  std::vector<Matrix> sinv_t(big.irreps.size());
  for (std::size_t r = 0; r < big.irreps.size(); ++r) {
    const Matrix& ch = tp.plan_gh.per_big[r].basis_change;  // S = ch^H, S^-1 = ch
    const Matrix& ck = tp.plan_gk.per_big[r].basis_change;  // T = ck^H, T^-1 = ck
    lp.s_mat[r] = adjoint(ch);
    lp.t_inv[r] = ck;
    sinv_t[r] = matmul(ch, adjoint(ck));
  }

  // columns grouped by (parent block, tau)
  struct PendingCol {
    int rho, u, v, r;
    bool first_host;
    std::vector<std::pair<int, std::vector<cplx>>> rows;  // (row base y, d_tau values) per j
  };
  std::map<std::pair<int, int>, std::vector<PendingCol>> grouped;

  for (std::size_t rho = 0; rho < big.irreps.size(); ++rho) {
    const auto& hlay = tp.plan_gh.per_big[rho].layout;
    const auto& klay = tp.plan_gk.per_big[rho].layout;
    for (std::size_t u = 0; u < hlay.size(); ++u) {
      const int sigma = hlay[u].small_id;
      const int d = cd.sigma[sigma].d;
      const int e = cd.sigma[sigma].e;
      const auto& orbit = cd.orbits[cd.sigma[sigma].orbit];
      const int osz = int(orbit.size());
      // hosting parent blocks of sigma's columns, in first-use order
      std::vector<int> hosts;
      for (int j = 0; j < e; ++j) {
        int blk = tp.lab.column_of[sigma][j].first;
        if (std::find(hosts.begin(), hosts.end(), blk) == hosts.end()) hosts.push_back(blk);
      }
      if (hosts.size() > 2) throw Error("a source block spilled over more than two parent blocks");
      for (std::size_t v = 0; v < klay.size(); ++v) {
        const int tau = klay[v].small_id;
        const int dtau = tp.irr_k->irreps[tau].dim;
        // folded data: btilde[(j,r), c'] = sum_k S^-1T[rowoff + (j*osz+k)*d + r, coloff + c']
        const int rowoff = hlay[u].row_offset;
        const int coloff = klay[v].row_offset;
        for (std::size_t hi = 0; hi < hosts.size(); ++hi) {
          const int blk = hosts[hi];
          for (int r = 0; r < d; ++r) {
            PendingCol pc;
            pc.rho = int(rho);
            pc.u = int(u);
            pc.v = int(v);
            pc.r = r;
            pc.first_host = (hi == 0);
            for (int j = 0; j < e; ++j) {
              if (tp.lab.column_of[sigma][j].first != blk) continue;
              std::vector<cplx> vals(dtau, 0.0);
              for (int cc = 0; cc < dtau; ++cc) {
                cplx s = 0;
                for (int kk = 0; kk < osz; ++kk)
                  s += sinv_t[rho](rowoff + (j * osz + kk) * d + r, coloff + cc);
                vals[cc] = s;
              }
              pc.rows.push_back({tp.lab.column_of[sigma][j].second, std::move(vals)});
            }
            grouped[{blk, tau}].push_back(std::move(pc));
          }
        }
      }
    }
  }

  for (auto& [key, cols] : grouped) {
    const auto [blk, tau] = key;
    const int b = tp.fmt.block_size(tp.fmt.block_level(blk));
    const int dtau = tp.irr_k->irreps[tau].dim;
    LiftPlan::Block lb;
    lb.pblock = blk;
    lb.tau = tau;
    lb.x3 = Matrix(b * dtau, int(cols.size()));
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      const auto& pc = cols[ci];
      lb.cols.push_back({pc.rho, pc.u, pc.v, pc.r, pc.first_host});
      for (const auto& [y, vals] : pc.rows)
        for (int cc = 0; cc < dtau; ++cc) lb.x3(y * dtau + cc, int(ci)) = vals[cc];
    }
    long long a = 1LL * b * dtau;
    lp.sum_a_sq += a * a;
    lp.sum_a_w += a * std::ssize(lb.cols);
    lp.blocks.push_back(std::move(lb));
  }

  if (lp.sum_a_sq > tp.r * tp.k.group->order())
    throw Error("lift block area exceeds r*|K|");
  if (lp.sum_a_w > 4LL * g->order())
    throw Error("lift width bound exceeded: " + std::to_string(lp.sum_a_w));

  probe_lift_plan(tp, big);
  return tp;
}

// ---------------------------------------------------------------------------
// intermediate representation and lift

IntermediateRep intermediate_rep(const GroupAlgebraElement& alpha, const TriplePlan& tp,
                                 const DftCallback& recurse_h, const DftCallback& recurse_k,
                                 OpCounter* c, TripleStats* stats) {
  const auto& g = alpha.group;
  {
    std::vector<char> in_hk(g->order(), 0);
    for (int e : tp.hk) in_hk[e] = 1;
    std::string offenders;
    for (int e = 0; e < g->order(); ++e)
      if (alpha.coeffs[e] != cplx(0.0) && !in_hk[e]) {
        offenders += (offenders.empty() ? "" : ", ") + std::to_string(e);
      }
    if (!offenders.empty())
      throw Error("support outside HK at elements: " + offenders);
  }

  const int nn = tp.n.group->order();
  const int ny = int(tp.y_reps.size());
  // per y: parent matrices (empty vector when the coset carries no support)
  std::vector<std::vector<ParentMatrix>> parents(ny);
  for (int yi = 0; yi < ny; ++yi) {
    const int y_parent = tp.k.to_parent[tp.y_reps[yi]];
    if (!coset_has_support(alpha, tp.h, y_parent)) continue;
    BlockDiagonal my = recurse_h(restrict_to_coset(alpha, tp.h, y_parent));
    if (stats) stats->h_dfts++;
    int inv = 0;
    parents[yi] = sparse_rewrite(my, tp.cd, tp.lab, *tp.irr_n, *tp.irr_h, c,
                                 /*check=*/true, &inv);
    if (stats) stats->inverse_n_dfts += inv;
  }

  IntermediateRep ir;
  ir.per_coord.resize(tp.lab.used.size());
  for (std::size_t a = 0; a < tp.lab.used.size(); ++a) {
    const auto& coord = tp.lab.used[a];
    GroupAlgebraElement beta{tp.k.group, std::vector<cplx>(tp.k.group->order()), std::nullopt};
    bool any = false;
    for (int yi = 0; yi < ny; ++yi) {
      if (parents[yi].empty()) continue;
      for (int n = 0; n < nn; ++n) {
        cplx v = parents[yi][n].blocks[coord.block](coord.row, coord.col);
        if (v == cplx(0.0)) continue;
        beta.coeffs[tp.k.group->mult(tp.n_to_k[n], tp.y_reps[yi])] = v;
        any = true;
      }
    }
    if (!any) {
      ir.per_coord[a] = BlockDiagonal::zeros_like(*tp.irr_k);
      continue;
    }
    beta.rebuild_support();
    BlockDiagonal kd = recurse_k(beta);
    if (stats) stats->k_dfts++;
    for (auto& b : kd.blocks) b = transpose(b);
    ir.per_coord[a] = std::move(kd);
  }
  return ir;
}

BlockDiagonal lift_to_g_dft(const IntermediateRep& ir, const TriplePlan& tp, OpCounter* c) {
  if (ir.per_coord.size() != tp.lab.used.size())
    throw Error("intermediate representation does not match the labeling");
  const auto& fmt = tp.lab.fmt;

  // per-block products Y3 = Z * X3
  std::vector<Matrix> y3(tp.lift.blocks.size());
  const int nblocks = int(tp.lift.blocks.size());
#pragma omp parallel for schedule(dynamic) if (nblocks > 1)
  for (int bi = 0; bi < nblocks; ++bi) {
    const auto& lb = tp.lift.blocks[bi];
    const int b = fmt.block_size(fmt.block_level(lb.pblock));
    const int dtau = tp.irr_k->irreps[lb.tau].dim;
    Matrix z(b * dtau, b * dtau);
    for (std::size_t a = 0; a < tp.lab.used.size(); ++a) {
      const auto& coord = tp.lab.used[a];
      if (coord.block != lb.pblock) continue;
      const Matrix& d = ir.per_coord[a].blocks[lb.tau];
      set_block(z, coord.row * dtau, coord.col * dtau, d);
    }
    matmul_into(z, lb.x3, y3[bi], c);
  }

  // unfold into W per big irrep, then S * W * T^-1
  std::vector<Matrix> w(tp.lift.s_mat.size());
  for (std::size_t r = 0; r < w.size(); ++r)
    w[r] = Matrix(tp.lift.s_mat[r].rows(), tp.lift.s_mat[r].rows());
  for (std::size_t bi = 0; bi < tp.lift.blocks.size(); ++bi) {
    const auto& lb = tp.lift.blocks[bi];
    const int dtau = tp.irr_k->irreps[lb.tau].dim;
    for (std::size_t ci = 0; ci < lb.cols.size(); ++ci) {
      const auto& col = lb.cols[ci];
      const auto& hslot = tp.plan_gh.per_big[col.rho].layout[col.u];
      const auto& kslot = tp.plan_gk.per_big[col.rho].layout[col.v];
      const int sigma = hslot.small_id;
      const int d = tp.cd.sigma[sigma].d;
      const int wu = tp.lab.height[sigma];
      Matrix& target = w[col.rho];
      // Accumulate onto the zero-initialized W; spilled columns (hosted by
      // two parent blocks) really sum, the first host is a free write.
      for (int i = 0; i < wu; ++i)
        for (int t = 0; t < dtau; ++t) {
          target(hslot.row_offset + i * d + col.r, kslot.row_offset + t) +=
              y3[bi](i * dtau + t, int(ci));
        }
      if (!col.first_host) count_ops(c, 0, std::uint64_t(wu) * dtau);
    }
  }
  BlockDiagonal out;
  out.blocks.resize(w.size());
  for (std::size_t r = 0; r < w.size(); ++r)
    out.blocks[r] = matmul(matmul(tp.lift.s_mat[r], w[r], c), tp.lift.t_inv[r], c);
  return out;
}

BlockDiagonal supported_dft_to_full(const GroupAlgebraElement& alpha,
                                    const std::vector<int>& s_set, const DftCallback& supported,
                                    const IrrepSet& big, const std::vector<int>& cover,
                                    const std::vector<BlockDiagonal>& rho_cover, OpCounter* c,
                                    std::uint64_t* repetitions) {
  const auto& g = alpha.group;
  std::vector<char> remaining(g->order(), 1);
  BlockDiagonal result = BlockDiagonal::zeros_like(big);
  std::uint64_t reps = 0;
  for (std::size_t t = 0; t < cover.size(); ++t) {
    const int tr = cover[t];
    GroupAlgebraElement beta{g, std::vector<cplx>(g->order()), std::nullopt};
    bool any = false;
    for (int s : s_set) {
      const int e = g->mult(s, tr);
      if (!remaining[e]) continue;
      remaining[e] = 0;  // consumed exactly once
      if (alpha.coeffs[e] != cplx(0.0)) {
        beta.coeffs[s] = alpha.coeffs[e];
        any = true;
      }
    }
    if (!any) continue;
    beta.rebuild_support();
    BlockDiagonal m = supported(beta);
    ++reps;
    if (tr == 0) {
      for (std::size_t r = 0; r < result.blocks.size(); ++r)
        add_into(result.blocks[r], m.blocks[r], c);
    } else {
      for (std::size_t r = 0; r < result.blocks.size(); ++r)
        matmul_acc(m.blocks[r], rho_cover[t].blocks[r], result.blocks[r], c);
    }
  }
  if (repetitions) *repetitions = reps;
  return result;
}

BlockDiagonal triple_subgroup_dft(const GroupAlgebraElement& alpha, const IrrepSet& big,
                                  const TriplePlan& tp, const DftCallback& recurse_h,
                                  const DftCallback& recurse_k, OpCounter* c,
                                  TripleStats* stats, Trace* trace) {
  OpCounts before = c ? c->snapshot() : OpCounts{};
  auto cb = [&](const GroupAlgebraElement& beta) {
    IntermediateRep ir = intermediate_rep(beta, tp, recurse_h, recurse_k, c, stats);
    return lift_to_g_dft(ir, tp, c);
  };
  std::uint64_t reps = 0;
  BlockDiagonal out = supported_dft_to_full(alpha, tp.hk, cb, big, tp.cover, tp.rho_cover, c,
                                            &reps);
  if (stats) {
    stats->repetitions += reps;
  }
  if (trace && c)
    trace_event(trace, "triple", big.group->label(), reps, c->snapshot() - before);
  return out;
}

// ---------------------------------------------------------------------------
// build-time probe of the composed lift map

namespace {

void probe_lift_plan(const TriplePlan& tp, const IrrepSet& big) {
  const int nn = tp.n.group->order();
  const std::size_t ncoord = tp.lab.used.size();
  // random per-label values, one per n; splitmix for reproducibility
  std::uint64_t state = 0x5bf03635ULL ^ big.group->hash();
  auto next_unit = [&state]() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return double(z >> 11) * 0x1.0p-52 - 1.0;
  };
  std::vector<std::vector<cplx>> val(nn, std::vector<cplx>(ncoord));
  for (int n = 0; n < nn; ++n)
    for (std::size_t a = 0; a < ncoord; ++a) val[n][a] = cplx(next_unit(), next_unit());

  // intermediate representation with y = identity: D_a = sum_n val * tau(n)^T
  IntermediateRep ir;
  ir.per_coord.resize(ncoord);
  for (std::size_t a = 0; a < ncoord; ++a) {
    BlockDiagonal d = BlockDiagonal::zeros_like(*tp.irr_k);
    for (int n = 0; n < nn; ++n) {
      const int kn = tp.n_to_k[n];
      for (int t = 0; t < tp.irr_k->count(); ++t)
        axpy(d.blocks[t], val[n][a], tp.irr_k->irreps[t].mat[kn], nullptr);
    }
    for (auto& b : d.blocks) b = transpose(b);
    ir.per_coord[a] = std::move(d);
  }
  BlockDiagonal lhs = lift_to_g_dft(ir, tp, nullptr);

  // dense reference: sum_n S (sum_u M_n (x) J) S^-1 T (sum_v tau(n)) T^-1
  double scale = 1.0;
  BlockDiagonal rhs;
  rhs.blocks.resize(big.irreps.size());
  for (std::size_t rho = 0; rho < big.irreps.size(); ++rho) {
    const int dim = big.irreps[rho].dim;
    Matrix acc(dim, dim);
    const auto& hlay = tp.plan_gh.per_big[rho].layout;
    const auto& klay = tp.plan_gk.per_big[rho].layout;
    Matrix sinv_t = matmul(tp.plan_gh.per_big[rho].basis_change,
                           adjoint(tp.plan_gk.per_big[rho].basis_change));
    for (int n = 0; n < nn; ++n) {
      Matrix a(dim, dim);
      for (const auto& slot : hlay) {
        const int sigma = slot.small_id;
        const int d = tp.cd.sigma[sigma].d;
        const auto& orbit = tp.cd.orbits[tp.cd.sigma[sigma].orbit];
        const int osz = int(orbit.size());
        const int e = tp.cd.sigma[sigma].e;
        const int w = tp.lab.height[sigma];
        Matrix mn(w, e);
        for (int i = 0; i < w; ++i)
          for (int j = 0; j < e; ++j) {
            auto [blk, col] = tp.lab.column_of[sigma][j];
            mn(i, j) = val[n][tp.lab.coord_index(blk, i, col)];
          }
        set_block(a, slot.row_offset, slot.row_offset, kron(mn, make_j(d, osz)));
      }
      Matrix b(dim, dim);
      for (const auto& slot : klay)
        set_block(b, slot.row_offset, slot.row_offset,
                  tp.irr_k->irreps[slot.small_id].mat[tp.n_to_k[n]]);
      Matrix term = matmul(matmul(a, sinv_t), b);
      add_into(acc, term, nullptr);
    }
    rhs.blocks[rho] =
        matmul(matmul(tp.lift.s_mat[rho], acc), tp.lift.t_inv[rho]);
    scale = std::max(scale, frob_norm(rhs.blocks[rho]));
  }
  double res = lhs.max_block_residual(rhs);
  if (res > 1e-6 * scale)
    throw NumericalError("lift plan probe residual " + std::to_string(res));
}

}  // namespace

}  // namespace gdft
