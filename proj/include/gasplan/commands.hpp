// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gasplan/constraint_system.hpp"
#include "gasplan/solver.hpp"

namespace gasplan {

// Exit codes shared by all commands.
enum ExitCode {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitLimit = 4,
  kExitNonMonotone = 5,
};

struct RunConfig {
  std::string instance_path;
  // Exactly one profile source: a profile file, or delta/epsilon generation.
  std::string profile_path;
  std::vector<double> deltas;  // one profile per delta
  double epsilon = -1.0;       // required with deltas
  std::string mode = "robust";       // robust | deterministic
  std::string policy = "monotone";   // monotone | general
  bool use_extremal = true;
  SolverOptions solver;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int samples = 1000;           // mc-check (and sampled robust models)
  std::string plan_path;        // mc-check
  std::vector<double> epsilons; // sweep
  std::string dump_model_path;  // optional model dump on solve
  int threads = 0;              // 0 = hardware default (mc-check only)
};

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_mc_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare_policy(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace gasplan
