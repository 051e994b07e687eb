#pragma once

#include <functional>
#include <memory>

#include "gdft/clifford.hpp"
#include "gdft/dft.hpp"

namespace gdft {

using DftCallback = std::function<BlockDiagonal(const GroupAlgebraElement&)>;

// ---------------------------------------------------------------------------
// single-subgroup and prime-index reductions

/// Precomputed data for the single-subgroup reduction: restriction plan of
/// the big set to H plus the big irreps at the coset representatives,
/// conjugated into the H-adapted basis. The conjugated matrices are circuit
/// constants and are not counted.
struct SingleSubgroupPlan {
  Subgroup h_sub;
  SubgroupGroup h;
  std::shared_ptr<const IrrepSet> irr_h;
  RestrictionPlan plan;
  std::vector<int> coset_x;                // right coset reps, identity first
  std::vector<BlockDiagonal> rho_adapted;  // per rep index (entry 0 unused)
};

SingleSubgroupPlan build_single_plan(const IrrepSet& big, const Subgroup& h,
                                     std::shared_ptr<const IrrepSet> irr_h);

/// H-DFT per coset via the callback, lift by block copying in the adapted
/// basis, assemble sum_x lift(s_x) * rho(x), conjugate back. Skips cosets
/// without support.
BlockDiagonal single_subgroup_dft(const GroupAlgebraElement& alpha, const IrrepSet& big,
                                  const SingleSubgroupPlan& sp, const DftCallback& recurse,
                                  OpCounter* c = nullptr);

struct PrimeIndexPlan {
  Subgroup n_sub;
  SubgroupGroup n;
  std::shared_ptr<const IrrepSet> irr_n;
  RestrictionPlan plan;
  int p = 0;
  int t = 0;                // generator coset representative
  std::vector<int> powers;  // t^j for j = 0..p-1
  BlockDiagonal rho_t;      // adapted big irreps at t
};

PrimeIndexPlan build_prime_plan(const IrrepSet& big, const Subgroup& n,
                                std::shared_ptr<const IrrepSet> irr_n);

/// p N-DFTs assembled by Horner evaluation in the block algebra.
BlockDiagonal prime_index_dft(const GroupAlgebraElement& alpha, const IrrepSet& big,
                              const PrimeIndexPlan& pp, const DftCallback& recurse,
                              OpCounter* c = nullptr);

// ---------------------------------------------------------------------------
// the triple-subgroup pipeline

/// Fixed block-size schedule receiving the rewrite labels: ceil(2m/4^i)
/// blocks of size 2^i x 2^i per level below the top, exactly two at the top
/// level ceil(log2 m).
struct TargetFormat {
  int m = 0;
  std::vector<int> level_counts;

  int levels() const { return int(level_counts.size()); }
  int block_size(int level) const { return 1 << level; }
  int num_blocks() const;
  int block_level(int block) const;
  int level_base(int level) const;  // first flattened block id of the level
  long long total_entries() const;  // r
};

TargetFormat build_target_format(int m);

struct Coord {
  int block = 0;
  int row = 0;
  int col = 0;
  auto operator<=>(const Coord&) const = default;
};

/// Injective per-family maps from (sigma, i, j) to target coordinates.
/// Each family restarts the first-fit cursors, so labels are shared across
/// families by construction.
struct Labeling {
  TargetFormat fmt;
  std::vector<int> height;                                 // per irr(H) id: dim/d
  std::vector<std::vector<std::pair<int, int>>> column_of;  // [sigma][j] -> (block, col)
  std::vector<Coord> used;                                 // sorted nonzero-label set
  struct Source {
    int sigma, i, j;
  };
  std::vector<std::vector<Source>> sources;  // per used coord

  int coord_index(int block, int row, int col) const;
};

Labeling build_labeling(const CliffordData& cd, const TargetFormat& fmt, const IrrepSet& irr_h);

/// Block-diagonal container in the target format holding the rewrite
/// coefficients; one per element of N.
struct ParentMatrix {
  std::vector<Matrix> blocks;
};

/// Rewrites a block-diagonal H-transform (N-adapted basis) as parent
/// matrices: one inverse N-DFT per used label, gathering the d x d
/// sub-blocks of every family mapped onto that label. The reconstruction
/// identity sum_n (M_n^sigma (x) J) sigma(n) = M^sigma is verified when
/// `check` is set (uncounted).
std::vector<ParentMatrix> sparse_rewrite(const BlockDiagonal& m, const CliffordData& cd,
                                         const Labeling& lab, const IrrepSet& irr_n,
                                         const IrrepSet& irr_h_adapted, OpCounter* c = nullptr,
                                         bool check = true, int* inverse_dfts = nullptr);

/// One X3 block per (parent block, irr(K)) pair; applying them to the
/// summed intermediate representation and unfolding realizes the whole lift
/// as a single linear map.
struct LiftPlan {
  struct Col {
    int rho, u, v, r;
    bool first_host;  // first of the (up to two) parent blocks hosting it
  };
  struct Block {
    int pblock = 0;
    int tau = 0;
    Matrix x3;  // (b * dim(tau)) x w
    std::vector<Col> cols;
  };
  std::vector<Block> blocks;
  std::vector<Matrix> s_mat;  // per big irrep: S
  std::vector<Matrix> t_inv;  // per big irrep: T^-1
  long long sum_a_sq = 0;     // sum of a_i^2 over emitted blocks
  long long sum_a_w = 0;      // sum of a_i * w_i
};

/// Per-coordinate K-transforms of the parent-matrix entries, transposed:
/// entry a holds sum_{n,y} P_{n,y}[coord a] * tau(ny)^T per irr(K).
struct IntermediateRep {
  std::vector<BlockDiagonal> per_coord;  // parallel to Labeling::used
};

struct TripleStats {
  std::uint64_t repetitions = 0;
  std::uint64_t h_dfts = 0;
  std::uint64_t inverse_n_dfts = 0;
  std::uint64_t k_dfts = 0;
};

struct TriplePlan {
  Subgroup n_sub, h_sub, k_sub;
  SubgroupGroup n, h, k;
  std::shared_ptr<const IrrepSet> irr_n;
  std::shared_ptr<const IrrepSet> irr_h;  // N-adapted
  std::shared_ptr<const IrrepSet> irr_k;
  CliffordData cd;
  RestrictionPlan plan_hn;  // adapted irr(H) -> irr(N), identity basis change
  TargetFormat fmt;
  Labeling lab;
  RestrictionPlan plan_gh;  // big -> adapted irr(H)
  RestrictionPlan plan_gk;  // big -> irr(K)
  LiftPlan lift;
  std::vector<int> hk;  // sorted product set (parent indices)
  std::vector<int> cover;
  std::vector<BlockDiagonal> rho_cover;  // per translate (identity entry empty)
  std::vector<int> y_reps;               // N-coset reps inside the K group
  std::vector<int> n_to_h;               // N-group index -> H-group index
  std::vector<int> n_to_k;
  long long r = 0;
};

/// Builds all triple machinery and probes the composed lift map on random
/// structured data; throws when the probe residual exceeds 1e-6.
TriplePlan build_triple_plan(const IrrepSet& big, const Subgroup& n, const Subgroup& h,
                             const Subgroup& k, std::shared_ptr<const IrrepSet> irr_n,
                             std::shared_ptr<const IrrepSet> irr_h_adapted,
                             std::shared_ptr<const IrrepSet> irr_k, const CliffordData& cd,
                             const RestrictionPlan& plan_hn);

/// |Y| H-DFTs, at most r|Y| inverse N-DFTs and r K-DFTs, for input
/// supported on HK.
IntermediateRep intermediate_rep(const GroupAlgebraElement& alpha, const TriplePlan& tp,
                                 const DftCallback& recurse_h, const DftCallback& recurse_k,
                                 OpCounter* c = nullptr, TripleStats* stats = nullptr);

/// Applies the precomputed linear map once: per-block products against X3,
/// unfold, then S * W * T^-1 per big irrep.
BlockDiagonal lift_to_g_dft(const IntermediateRep& ir, const TriplePlan& tp,
                            OpCounter* c = nullptr);

/// Covers G by right translates of S; per translate, transforms the still
/// unconsumed coefficients shifted back into S and multiplies by rho(g).
/// rho_cover holds the translate matrices (identity entry empty).
BlockDiagonal supported_dft_to_full(const GroupAlgebraElement& alpha,
                                    const std::vector<int>& s_set, const DftCallback& supported,
                                    const IrrepSet& big, const std::vector<int>& cover,
                                    const std::vector<BlockDiagonal>& rho_cover,
                                    OpCounter* c = nullptr, std::uint64_t* repetitions = nullptr);

/// The full pipeline: intermediate representation + lift inside the
/// translate cover.
BlockDiagonal triple_subgroup_dft(const GroupAlgebraElement& alpha, const IrrepSet& big,
                                  const TriplePlan& tp, const DftCallback& recurse_h,
                                  const DftCallback& recurse_k, OpCounter* c = nullptr,
                                  TripleStats* stats = nullptr, Trace* trace = nullptr);

}  // namespace gdft
