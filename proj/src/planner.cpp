#include "gdft/planner.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "gdft/errors.hpp"

namespace gdft {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Naive: return "naive";
    case Strategy::Single: return "single";
    case Strategy::PrimeIndex: return "prime";
    case Strategy::Triple: return "triple";
  }
  return "?";
}

CostEstimate estimate_naive(const IrrepSet& s) {
  std::uint64_t work = std::uint64_t(s.group->order()) * std::uint64_t(s.total_entries());
  return {work, work};
}

namespace {

std::uint64_t inverse_dft_cmul(const IrrepSet& s) {
  std::uint64_t per_elt = 1;
  for (const auto& r : s.irreps) per_elt += std::uint64_t(r.dim) * r.dim + 1;
  return std::uint64_t(s.group->order()) * per_elt;
}

std::uint64_t inverse_dft_cadd(const IrrepSet& s) {
  std::uint64_t per_elt = 0;
  for (const auto& r : s.irreps) per_elt += std::uint64_t(r.dim) * r.dim;
  return std::uint64_t(s.group->order()) * per_elt;
}

CostEstimate conjugation_cost(const IrrepSet& s, const RestrictionPlan& plan) {
  CostEstimate e;
  for (std::size_t r = 0; r < s.irreps.size(); ++r) {
    if (plan.per_big[r].identity) continue;
    std::uint64_t d = s.irreps[r].dim;
    e.cmul += 2 * d * d * d;
    e.cadd += 2 * d * d * (d - 1);
  }
  return e;
}

std::uint64_t layout_block_area(const IrrepSet& small, const RestrictionPlan::PerBig& pb) {
  std::uint64_t a = 0;
  for (const auto& slot : pb.layout) {
    std::uint64_t d = small.irreps[slot.small_id].dim;
    a += d * d;
  }
  return a;
}

bool is_prime_int(int v) {
  if (v < 2) return false;
  for (int d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

void make_single_payload(PlanNode& node, const Subgroup& h, std::uint64_t seed) {
  node.strategy = Strategy::Single;
  auto hg = subgroup_as_group(h);
  auto irr_h = std::make_shared<const IrrepSet>(compute_irreps(hg.group, seed));
  node.single = build_single_plan(*node.irreps, h, irr_h);
}

void make_prime_payload(PlanNode& node, const Subgroup& n, std::uint64_t seed) {
  node.strategy = Strategy::PrimeIndex;
  auto ng = subgroup_as_group(n);
  auto irr_n = std::make_shared<const IrrepSet>(compute_irreps(ng.group, seed));
  node.prime = build_prime_plan(*node.irreps, n, irr_n);
}

void make_triple_payload(PlanNode& node, const Subgroup& n, const Subgroup& h, const Subgroup& k,
                         std::uint64_t seed) {
  node.strategy = Strategy::Triple;
  auto ng = subgroup_as_group(n);
  auto hg = subgroup_as_group(h);
  auto kg = subgroup_as_group(k);
  auto irr_n = std::make_shared<const IrrepSet>(compute_irreps(ng.group, seed));
  auto irr_h_raw = compute_irreps(hg.group, seed);
  Subgroup n_in_h{hg.group, {}};
  for (int e : n.elements) n_in_h.elements.push_back(hg.index_in_subgroup[e]);
  std::sort(n_in_h.elements.begin(), n_in_h.elements.end());
  auto n_in_h_grp = subgroup_as_group(n_in_h);
  if (n_in_h_grp.group->hash() != irr_n->group->hash())
    throw Error("N embeds with a different canonical table");
  CliffordAdapted ca = clifford_adapt(irr_h_raw, n_in_h_grp, *irr_n);
  auto irr_h = std::make_shared<const IrrepSet>(std::move(ca.irr_h));
  auto irr_k = std::make_shared<const IrrepSet>(compute_irreps(kg.group, seed));
  node.triple = build_triple_plan(*node.irreps, n, h, k, irr_n, irr_h, irr_k, ca.cd, ca.plan);
}

void finalize_estimate(PlanNode& node) {
  switch (node.strategy) {
    case Strategy::Naive: {
      node.estimate = estimate_naive(*node.irreps);
      return;
    }
    case Strategy::Single: {
      const auto& sp = *node.single;
      CostEstimate e;
      std::uint64_t translates = sp.coset_x.size();
      e.cmul += translates * node.child->estimate.cmul;
      e.cadd += translates * node.child->estimate.cadd;
      for (std::size_t r = 0; r < node.irreps->irreps.size(); ++r) {
        std::uint64_t dim = node.irreps->irreps[r].dim;
        std::uint64_t area = layout_block_area(*sp.irr_h, sp.plan.per_big[r]);
        e.cmul += (translates - 1) * area * dim;
        e.cadd += (translates - 1) * area * dim;
      }
      CostEstimate conj = conjugation_cost(*node.irreps, sp.plan);
      e.cmul += conj.cmul;
      e.cadd += conj.cadd;
      node.estimate = e;
      return;
    }
    case Strategy::PrimeIndex: {
      const auto& pp = *node.prime;
      CostEstimate e;
      std::uint64_t p = pp.p;
      e.cmul += p * node.child->estimate.cmul;
      e.cadd += p * node.child->estimate.cadd;
      for (std::size_t r = 0; r < node.irreps->irreps.size(); ++r) {
        std::uint64_t dim = node.irreps->irreps[r].dim;
        e.cmul += (p - 1) * dim * dim * dim;
        e.cadd += (p - 1) * (dim * dim * (dim - 1) + dim * dim);
      }
      CostEstimate conj = conjugation_cost(*node.irreps, pp.plan);
      e.cmul += conj.cmul;
      e.cadd += conj.cadd;
      node.estimate = e;
      return;
    }
    case Strategy::Triple: {
      const auto& tp = *node.triple;
      CostEstimate e;
      std::uint64_t reps = tp.cover.size();
      std::uint64_t y_count = tp.y_reps.size();
      std::uint64_t used = tp.lab.used.size();
      e.cmul += y_count * node.child_h->estimate.cmul +
                used * y_count * inverse_dft_cmul(*tp.irr_n);
      e.cadd += y_count * node.child_h->estimate.cadd +
                used * y_count * inverse_dft_cadd(*tp.irr_n);
      e.cmul += used * node.child_k->estimate.cmul;
      e.cadd += used * node.child_k->estimate.cadd;
      for (const auto& lb : tp.lift.blocks) {
        std::uint64_t a = lb.x3.rows();
        std::uint64_t wdt = lb.x3.cols();
        e.cmul += a * a * wdt;
        e.cadd += a * wdt * (a - 1);
      }
      for (const auto& rho : node.irreps->irreps) {
        std::uint64_t d = rho.dim;
        e.cmul += 2 * d * d * d;
        e.cadd += 2 * d * d * (d - 1);
      }
      e.cmul *= reps;
      e.cadd *= reps;
      for (std::size_t t = 0; t < tp.cover.size(); ++t) {
        for (const auto& rho : node.irreps->irreps) {
          std::uint64_t d = rho.dim;
          if (tp.cover[t] == 0)
            e.cadd += d * d;
          else {
            e.cmul += d * d * d;
            e.cadd += d * d * d;
          }
        }
      }
      node.estimate = e;
      return;
    }
  }
}

struct Builder {
  PlannerConfig config;

  std::unique_ptr<PlanNode> make_node(const GroupPtr& g,
                                      std::shared_ptr<const IrrepSet> irreps) {
    if (g->order() > config.order_cap) throw CapError("group exceeds the planner cap");
    auto node = std::make_unique<PlanNode>();
    node->group = g;
    node->irreps = irreps ? std::move(irreps)
                          : std::make_shared<const IrrepSet>(compute_irreps(g, config.seed));
    return node;
  }

  std::unique_ptr<PlanNode> build(const GroupPtr& g, std::shared_ptr<const IrrepSet> irreps,
                                  std::optional<Strategy> force) {
    auto node = make_node(g, std::move(irreps));
    Strategy chosen;
    if (force)
      chosen = *force;
    else if (g->order() <= config.base_order)
      chosen = Strategy::Naive;
    else
      chosen = pick_strategy(g);

    switch (chosen) {
      case Strategy::Naive:
        node->strategy = Strategy::Naive;
        break;
      case Strategy::Single: {
        Subgroup h = force ? largest_proper_subgroup(g) : *threshold_subgroup(g);
        make_single_payload(*node, h, config.seed);
        node->child = build(node->single->h.group, node->single->irr_h, std::nullopt);
        break;
      }
      case Strategy::PrimeIndex: {
        make_prime_payload(*node, prime_index_normal(g), config.seed);
        node->child = build(node->prime->n.group, node->prime->irr_n, std::nullopt);
        break;
      }
      case Strategy::Triple: {
        auto choice = find_triple(g, config.order_cap);
        auto* tc = std::get_if<TripleCase>(&choice);
        if (!tc) throw CapError("no valid subgroup triple for " + g->label());
        make_triple_payload(*node, tc->n, tc->h, tc->k, config.seed);
        node->child_h = build(node->triple->h.group, node->triple->irr_h, std::nullopt);
        node->child_k = build(node->triple->k.group, node->triple->irr_k, std::nullopt);
        break;
      }
    }
    finalize_estimate(*node);
    return node;
  }

  Strategy pick_strategy(const GroupPtr& g) {
    if (threshold_subgroup(g)) return Strategy::Single;
    auto choice = find_triple(g, config.order_cap);
    if (std::holds_alternative<BaseCase>(choice)) return Strategy::Naive;
    if (std::holds_alternative<PrimeIndexCase>(choice)) return Strategy::PrimeIndex;
    return Strategy::Triple;
  }

  std::optional<Subgroup> threshold_subgroup(const GroupPtr& g) {
    const double threshold = std::pow(double(g->order()), 1.0 - config.epsilon / 2.0);
    auto subs = all_subgroups(g, 0, config.order_cap);
    std::optional<Subgroup> best;
    for (auto& s : subs) {
      if (s.order() >= g->order()) continue;
      if (double(s.order()) + 1e-9 < threshold) continue;
      if (!best || s.order() > best->order()) best = s;
    }
    return best;
  }

  Subgroup largest_proper_subgroup(const GroupPtr& g) {
    auto subs = all_subgroups(g, 0, config.order_cap);
    Subgroup best = trivial_subgroup(g);
    for (auto& s : subs)
      if (s.order() < g->order() && s.order() > best.order()) best = s;
    return best;
  }

  Subgroup prime_index_normal(const GroupPtr& g) {
    auto choice = find_triple(g, config.order_cap);
    if (auto* pc = std::get_if<PrimeIndexCase>(&choice)) return pc->n;
    std::optional<Subgroup> best;
    for (auto& s : normal_subgroups(g)) {
      if (s.order() >= g->order() || !is_prime_int(g->order() / s.order())) continue;
      if (!best || s.order() > best->order()) best = s;
    }
    if (!best) throw CapError("no prime-index normal subgroup in " + g->label());
    return *best;
  }
};

BlockDiagonal exec_node(const PlanNode& node, const GroupAlgebraElement& alpha, OpCounter* c,
                        Trace* trace, TripleStats* stats) {
  switch (node.strategy) {
    case Strategy::Naive:
      return naive_dft(alpha, *node.irreps, c);
    case Strategy::Single:
      return single_subgroup_dft(
          alpha, *node.irreps, *node.single,
          [&](const GroupAlgebraElement& b) { return exec_node(*node.child, b, c, trace, stats); },
          c);
    case Strategy::PrimeIndex:
      return prime_index_dft(
          alpha, *node.irreps, *node.prime,
          [&](const GroupAlgebraElement& b) { return exec_node(*node.child, b, c, trace, stats); },
          c);
    case Strategy::Triple:
      return triple_subgroup_dft(
          alpha, *node.irreps, *node.triple,
          [&](const GroupAlgebraElement& b) {
            return exec_node(*node.child_h, b, c, trace, stats);
          },
          [&](const GroupAlgebraElement& b) {
            return exec_node(*node.child_k, b, c, trace, stats);
          },
          c, stats, trace);
  }
  throw Error("unreachable strategy");
}

nlohmann::json dump_node(const PlanNode& node) {
  nlohmann::json j;
  j["strategy"] = strategy_name(node.strategy);
  j["order"] = node.group->order();
  j["label"] = node.group->label();
  j["estimate"] = {{"cmul", node.estimate.cmul}, {"cadd", node.estimate.cadd}};
  switch (node.strategy) {
    case Strategy::Naive:
      break;
    case Strategy::Single:
      j["h"] = node.single->h_sub.elements;
      j["child"] = dump_node(*node.child);
      break;
    case Strategy::PrimeIndex:
      j["n"] = node.prime->n_sub.elements;
      j["child"] = dump_node(*node.child);
      break;
    case Strategy::Triple:
      j["n"] = node.triple->n_sub.elements;
      j["h"] = node.triple->h_sub.elements;
      j["k"] = node.triple->k_sub.elements;
      j["child_h"] = dump_node(*node.child_h);
      j["child_k"] = dump_node(*node.child_k);
      break;
  }
  return j;
}

struct JsonBuilder {
  PlannerConfig config;

  Subgroup subgroup_from(const GroupPtr& g, const nlohmann::json& arr) {
    Subgroup s{g, arr.get<std::vector<int>>()};
    std::sort(s.elements.begin(), s.elements.end());
    for (int e : s.elements)
      if (e < 0 || e >= g->order()) throw ParseError("plan subgroup element out of range");
    auto closed = subgroup_closure(g, s.elements);
    if (!(closed == s)) throw ParseError("forced plan subgroup is not closed");
    return s;
  }

  std::unique_ptr<PlanNode> build(const GroupPtr& g, std::shared_ptr<const IrrepSet> irreps,
                                  const nlohmann::json& spec) {
    Builder helper{config};
    auto node = helper.make_node(g, std::move(irreps));
    const std::string strat = spec.value("strategy", "naive");
    if (strat == "naive") {
      node->strategy = Strategy::Naive;
    } else if (strat == "single") {
      make_single_payload(*node, subgroup_from(g, spec.at("h")), config.seed);
      node->child = build(node->single->h.group, node->single->irr_h, spec.at("child"));
    } else if (strat == "prime") {
      make_prime_payload(*node, subgroup_from(g, spec.at("n")), config.seed);
      node->child = build(node->prime->n.group, node->prime->irr_n, spec.at("child"));
    } else if (strat == "triple") {
      make_triple_payload(*node, subgroup_from(g, spec.at("n")), subgroup_from(g, spec.at("h")),
                          subgroup_from(g, spec.at("k")), config.seed);
      node->child_h = build(node->triple->h.group, node->triple->irr_h, spec.at("child_h"));
      node->child_k = build(node->triple->k.group, node->triple->irr_k, spec.at("child_k"));
    } else {
      throw ParseError("unknown strategy in plan spec: " + strat);
    }
    finalize_estimate(*node);
    return node;
  }
};

}  // namespace

Plan make_plan(const GroupPtr& g, const PlannerConfig& config,
               std::shared_ptr<const IrrepSet> root_irreps) {
  Builder b{config};
  Plan plan;
  plan.config = config;
  plan.root = b.build(g, std::move(root_irreps), config.force_root);
  return plan;
}

std::vector<Strategy> applicable_strategies(const GroupPtr& g) {
  std::vector<Strategy> out{Strategy::Naive};
  for (const auto& s : all_subgroups(g))
    if (s.order() > 1 && s.order() < g->order()) {
      out.push_back(Strategy::Single);
      break;
    }
  bool has_prime_normal = false;
  for (const auto& s : normal_subgroups(g))
    if (s.order() < g->order() && is_prime_int(g->order() / s.order())) has_prime_normal = true;
  if (has_prime_normal) out.push_back(Strategy::PrimeIndex);
  if (g->order() >= 2 &&
      std::holds_alternative<TripleCase>(find_triple(g)))
    out.push_back(Strategy::Triple);
  return out;
}

BlockDiagonal execute_plan(const Plan& plan, const GroupAlgebraElement& alpha, OpCounter* c,
                           Trace* trace, TripleStats* stats) {
  if (alpha.group->hash() != plan.root->group->hash())
    throw Error("input lives on a different group than the plan");
  return exec_node(*plan.root, alpha, c, trace, stats);
}

nlohmann::json dump_plan(const Plan& plan) {
  nlohmann::json j;
  j["base_order"] = plan.config.base_order;
  j["epsilon"] = plan.config.epsilon;
  j["tree"] = dump_node(*plan.root);
  return j;
}

Plan plan_from_json(const GroupPtr& g, const nlohmann::json& spec, const PlannerConfig& config) {
  Plan plan;
  plan.config = config;
  JsonBuilder b{config};
  plan.root = b.build(g, nullptr, spec.contains("tree") ? spec.at("tree") : spec);
  return plan;
}

}  // namespace gdft
