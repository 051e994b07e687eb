#pragma once

#include <nlohmann/json_fwd.hpp>

#include "gdft/reductions.hpp"

namespace gdft {

enum class Strategy { Naive, Single, PrimeIndex, Triple };

const char* strategy_name(Strategy s);

struct PlannerConfig {
  int base_order = 24;
  double epsilon = 0.3;
  std::uint64_t seed = 0;
  std::optional<Strategy> force_root;  // testing hook; children always auto
  int order_cap = 512;
};

struct CostEstimate {
  std::uint64_t cmul = 0;
  std::uint64_t cadd = 0;
  std::uint64_t total() const { return cmul + cadd; }
};

/// One node of the recursion tree. Every leaf is Naive; each node owns the
/// irrep set its output is expressed in plus the precomputed reduction data
/// (circuit constants).
struct PlanNode {
  Strategy strategy = Strategy::Naive;
  GroupPtr group;
  std::shared_ptr<const IrrepSet> irreps;
  CostEstimate estimate;  // whole subtree, dense input

  std::optional<SingleSubgroupPlan> single;
  std::optional<PrimeIndexPlan> prime;
  std::optional<TriplePlan> triple;

  std::unique_ptr<PlanNode> child;    // single / prime
  std::unique_ptr<PlanNode> child_h;  // triple
  std::unique_ptr<PlanNode> child_k;
};

struct Plan {
  std::unique_ptr<PlanNode> root;
  PlannerConfig config;
};

/// Base case at or below base_order; otherwise the largest proper subgroup
/// of order >= |G|^(1-epsilon/2) drives the single-subgroup reduction, and
/// failing that the structure search decides prime-index vs triple.
/// Deterministic for a fixed config. A precomputed root irrep set may be
/// supplied to avoid rebuilding it per plan.
Plan make_plan(const GroupPtr& g, const PlannerConfig& config = {},
               std::shared_ptr<const IrrepSet> root_irreps = nullptr);

/// Strategies that can be forced at the root of this group: Naive always;
/// Single with any nontrivial proper subgroup; PrimeIndex with a
/// prime-index normal subgroup; Triple when the structure search yields a
/// subgroup pair.
std::vector<Strategy> applicable_strategies(const GroupPtr& g);

/// Same tree shape with the strategy of the root forced; children auto.
BlockDiagonal execute_plan(const Plan& plan, const GroupAlgebraElement& alpha,
                           OpCounter* c = nullptr, Trace* trace = nullptr,
                           TripleStats* stats = nullptr);

/// Closed-form dense estimate of the naive transform over a set.
CostEstimate estimate_naive(const IrrepSet& s);

nlohmann::json dump_plan(const Plan& plan);

/// Rebuilds a plan from its JSON dump (strategies and subgroup element
/// lists are honored; estimates are recomputed).
Plan plan_from_json(const GroupPtr& g, const nlohmann::json& spec,
                    const PlannerConfig& config = {});

}  // namespace gdft
