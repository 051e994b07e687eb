#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "gdft/errors.hpp"
#include "gdft/io.hpp"
#include "gdft/planner.hpp"

namespace {

using namespace gdft;

constexpr int kExitVerifyFail = 1;
constexpr int kExitParse = 2;
constexpr int kExitCap = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
  std::string group;
  std::string strategy = "auto";
  int base_order = 24;
  double epsilon = 0.3;
  std::uint64_t seed = 0;
};

std::optional<Strategy> parse_strategy(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "naive") return Strategy::Naive;
  if (s == "single") return Strategy::Single;
  if (s == "prime") return Strategy::PrimeIndex;
  if (s == "triple") return Strategy::Triple;
  throw ParseError("unknown strategy: " + s);
}

PlannerConfig config_of(const CommonOpts& o) {
  PlannerConfig cfg;
  cfg.base_order = o.base_order;
  cfg.epsilon = o.epsilon;
  cfg.seed = o.seed;
  cfg.force_root = parse_strategy(o.strategy);
  return cfg;
}

std::vector<std::string> strategy_choices(const GroupPtr& g) {
  std::vector<std::string> out{"auto"};
  for (Strategy s : applicable_strategies(g)) out.push_back(strategy_name(s));
  return out;
}

int cmd_dft(const CommonOpts& opts, const std::string& alpha_src, const std::string& out_path,
            const std::string& trace_path, const std::string& plan_in,
            const std::string& plan_out) {
  GroupPtr g = group_from_cli(opts.group);
  GroupAlgebraElement alpha = alpha_from_cli(alpha_src, g);

  Plan plan;
  if (!plan_in.empty()) {
    std::ifstream f(plan_in);
    if (!f) throw ParseError("cannot open plan file: " + plan_in);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad plan JSON: ") + e.what());
    }
    plan = plan_from_json(g, j, config_of(opts));
  } else {
    plan = make_plan(g, config_of(opts));
  }
  if (!plan_out.empty()) {
    std::ofstream f(plan_out);
    f << dump_plan(plan).dump(2) << "\n";
  }

  OpCounter counter;
  Trace trace;
  BlockDiagonal result = execute_plan(plan, alpha, &counter, &trace);

  nlohmann::json j = block_diagonal_to_json(result, *plan.root->irreps);
  j["strategy"] = strategy_name(plan.root->strategy);
  j["cmul"] = counter.cmul();
  j["cadd"] = counter.cadd();
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw ParseError("cannot open output path: " + out_path);
    f << j.dump(2) << "\n";
  }
  if (!trace_path.empty()) {
    std::ofstream f(trace_path);
    f << trace_to_json(trace).dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(const CommonOpts& opts, int seeds, std::string strategies_arg) {
  GroupPtr g = group_from_cli(opts.group);
  std::vector<std::string> strategies;
  if (strategies_arg.empty() || strategies_arg == "applicable") {
    strategies = strategy_choices(g);
  } else {
    std::istringstream ss(strategies_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) strategies.push_back(tok);
  }

  IrrepSet irreps = compute_irreps(g, opts.seed);
  bool all_ok = true;
  double worst = 0;
  std::string worst_at;
  for (const auto& strat : strategies) {
    CommonOpts o = opts;
    o.strategy = strat;
    Plan plan = make_plan(g, config_of(o));
    for (int s = 0; s < seeds; ++s) {
      GroupAlgebraElement alpha = random_alpha(g, opts.seed + s);
      BlockDiagonal expect = naive_dft(alpha, irreps);
      BlockDiagonal got = execute_plan(plan, alpha);
      double res = got.max_block_residual(expect) / std::max(alpha.norm1(), 1e-30);
      std::cout << g->label() << " strategy=" << strat << " seed=" << s
                << " residual=" << res << "\n";
      if (res > worst) {
        worst = res;
        worst_at = strat + "/seed" + std::to_string(s);
      }
      if (res > 1e-6) all_ok = false;
    }
  }
  if (!all_ok) {
    std::cerr << "FAIL worst residual " << worst << " at " << worst_at << "\n";
    return kExitVerifyFail;
  }
  return 0;
}

int cmd_bench(const std::string& catalog_name, const std::string& groups_arg,
              const std::string& out_path, bool verify, std::uint64_t seed,
              const std::string& strategies_arg) {
  std::vector<std::pair<std::string, GroupPtr>> groups;
  if (!groups_arg.empty()) {
    std::istringstream ss(groups_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) groups.emplace_back(tok, group_from_cli(tok));
  } else if (!catalog_name.empty()) {
    groups = catalog(catalog_name);
  }

  std::ostringstream csv;
  csv << "group,label,order,strategy,cmul,cadd,ms,residual,error\n";
  for (const auto& [spec, g] : groups) {
    std::vector<std::string> strategies{"naive", "auto"};
    if (!strategies_arg.empty()) {
      strategies.clear();
      std::istringstream ss(strategies_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) strategies.push_back(tok);
    }
    for (const auto& strat : strategies) {
      csv << spec << "," << g->label() << "," << g->order() << "," << strat << ",";
      try {
        CommonOpts o;
        o.strategy = strat;
        o.seed = seed;
        Plan plan = make_plan(g, config_of(o));
        GroupAlgebraElement alpha = random_alpha(g, seed);
        OpCounter counter;
        auto t0 = std::chrono::steady_clock::now();
        BlockDiagonal result = execute_plan(plan, alpha, &counter);
        auto t1 = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        csv << counter.cmul() << "," << counter.cadd() << "," << ms << ",";
        if (verify) {
          IrrepSet irreps = compute_irreps(g, seed);
          BlockDiagonal expect = naive_dft(alpha, irreps);
          csv << result.max_block_residual(expect) / std::max(alpha.norm1(), 1e-30);
        }
        csv << ",\n";
      } catch (const Error& e) {
        csv << ",,,," << e.what() << "\n";
      }
    }
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream f(out_path);
    if (!f) throw ParseError("cannot open output path: " + out_path);
    f << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized DFTs over finite groups via subgroup reductions"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string alpha_src = "random:0";
  std::string out_path;
  std::string trace_path;
  std::string plan_in, plan_out;
  int seeds = 5;
  std::string strategies_arg;
  std::string catalog_name;
  std::string groups_arg;
  bool no_verify = false;

  auto add_common = [&](CLI::App* cmd, bool need_group) {
    auto* gopt = cmd->add_option("--group", opts.group, "group spec (name:n or file)");
    if (need_group) gopt->required();
    cmd->add_option("--strategy", opts.strategy, "auto|naive|single|prime|triple");
    cmd->add_option("--base-order", opts.base_order, "planner base case order");
    cmd->add_option("--epsilon", opts.epsilon, "planner subgroup threshold exponent");
    cmd->add_option("--seed", opts.seed, "seed for irreps and random inputs");
  };

  auto* dft = app.add_subcommand("dft", "compute a transform and write it as JSON");
  add_common(dft, true);
  dft->add_option("--alpha", alpha_src, "coefficients: file or random:<seed>");
  dft->add_option("--out", out_path, "output path (default stdout)");
  dft->add_option("--trace", trace_path, "write per-stage trace JSON");
  dft->add_option("--plan", plan_in, "forced plan JSON input");
  dft->add_option("--dump-plan", plan_out, "write the plan tree as JSON");

  auto* verify = app.add_subcommand("verify", "compare strategies against the naive transform");
  add_common(verify, true);
  verify->add_option("--seeds", seeds, "number of random inputs per strategy");
  verify->add_option("--strategies", strategies_arg, "comma list (default: applicable)");

  auto* bench = app.add_subcommand("bench", "measure operation counts, write CSV");
  bench->add_option("--catalog", catalog_name, "smoke|cyclic2k|triples|acceptance");
  bench->add_option("--groups", groups_arg, "comma list of group specs");
  bench->add_option("--out", out_path, "CSV path (default stdout)");
  bench->add_option("--strategies", strategies_arg, "comma list (default: naive,auto)");
  bench->add_option("--seed", opts.seed, "input seed");
  bench->add_flag("--no-verify", no_verify, "skip the residual column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dft->parsed()) return cmd_dft(opts, alpha_src, out_path, trace_path, plan_in, plan_out);
    if (verify->parsed()) return cmd_verify(opts, seeds, strategies_arg);
    if (bench->parsed())
      return cmd_bench(catalog_name, groups_arg, out_path, !no_verify, opts.seed,
                       strategies_arg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CapError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kExitCap;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
