// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// gasplan: robust expansion planning for steady-state gas pipeline networks.
//
//   gasplan solve          minimum-cost expansion plan for one instance
//   gasplan sweep          cost vs demand-uncertainty width (CSV)
//   gasplan mc-check       Monte Carlo feasibility audit of a saved plan
//   gasplan compare-policy solve with and without the monotone boost policy
#include <iostream>

#include "CLI11.hpp"
#include "gasplan/commands.hpp"

namespace {

void add_common(CLI::App* cmd, gasplan::RunConfig& config, bool* seed_flag) {
  cmd->add_option("--instance", config.instance_path, "instance JSON file")
      ->required();
  cmd->add_option("--profile", config.profile_path,
                  "demand profile JSON (single object or array)");
  cmd->add_option("--delta", config.deltas,
                  "demand scaling factor(s), one profile per value")
      ->delimiter(',');
  cmd->add_option("--epsilon", config.epsilon,
                  "relative half-width of the demand box");
  cmd->add_option("--policy", config.policy, "monotone | general")
      ->check(CLI::IsMember({"monotone", "general"}));
  cmd->add_option("--out-dir", config.out_dir, "artifact output directory");
  auto* seed = cmd->add_option("--seed", config.seed, "root seed for all sampling");
  cmd->callback([seed, seed_flag]() { *seed_flag = seed->count() > 0; });
  cmd->add_option("--gap-tol", config.solver.gap_tol, "relative optimality gap");
  cmd->add_option("--cut-tol", config.solver.cut_tol, "cone violation threshold");
  cmd->add_option("--node-limit", config.solver.node_limit, "branch-and-bound node budget");
  cmd->add_option("--time-limit", config.solver.time_limit_s, "wall-clock limit (s)");
  cmd->add_option("--threads", config.threads, "worker threads for mc-check");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust gas pipeline network expansion planning"};
  app.require_subcommand(1);

  gasplan::RunConfig config;
  bool seed_flag = false;

  auto* solve = app.add_subcommand("solve", "compute a minimum-cost expansion plan");
  add_common(solve, config, &seed_flag);
  solve->add_option("--mode", config.mode, "robust | deterministic")
      ->check(CLI::IsMember({"robust", "deterministic"}));
  solve->add_flag("!--no-extremal", config.use_extremal,
                  "model sampled scenarios instead of the two extremal ones");
  solve->add_option("--samples", config.samples,
                    "scenario count per profile with --no-extremal");
  solve->add_option("--dump-model", config.dump_model_path,
                    "write a human-readable and JSON model listing");

  auto* sweep = app.add_subcommand("sweep", "solve across a grid of epsilon values");
  add_common(sweep, config, &seed_flag);
  sweep->add_option("--epsilons", config.epsilons, "ascending epsilon grid")
      ->delimiter(',')
      ->required();

  auto* mc = app.add_subcommand("mc-check", "Monte Carlo feasibility audit of a plan");
  add_common(mc, config, &seed_flag);
  mc->add_option("--plan", config.plan_path, "plan.json produced by solve")->required();
  mc->add_option("--samples", config.samples, "samples per profile");

  auto* cmp = app.add_subcommand("compare-policy",
                                 "robust solve with and without the boost policy");
  add_common(cmp, config, &seed_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : gasplan::kExitConfig;
  }
  config.seed_set = seed_flag;

  try {
    if (solve->parsed()) return gasplan::cmd_solve(config, std::cout, std::cerr);
    if (sweep->parsed()) return gasplan::cmd_sweep(config, std::cout, std::cerr);
    if (mc->parsed()) return gasplan::cmd_mc_check(config, std::cout, std::cerr);
    if (cmp->parsed()) return gasplan::cmd_compare_policy(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return gasplan::kExitInternal;
  }
  return gasplan::kExitConfig;
}
