// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gasplan/constraint_system.hpp"
#include "gasplan/lp_solver.hpp"
#include "gasplan/physics.hpp"

namespace gasplan {

struct SolverOptions {
  double gap_tol = 1e-6;      // relative, (obj - bound) / max(1, obj)
  double cut_tol = 1e-7;      // relative cone violation that triggers a cut
  int cut_rounds = 8;         // separation rounds per node
  std::int64_t node_limit = 200000;
  double time_limit_s = 0.0;  // 0 = unlimited
};

enum class SolveStatus { kOptimal, kInfeasible, kGapLimit, kNodeLimit };

const char* solve_status_name(SolveStatus s);

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t cuts = 0;
  std::int64_t no_goods = 0;
  std::int64_t lp_iterations = 0;
  std::int64_t verify_calls = 0;
  double wall_ms = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  ExpansionPlan plan;
  double objective = 0.0;  // equals plan cost (plus any fixed constant)
  double bound = 0.0;      // best proven lower bound
  double gap = 0.0;        // (objective - bound) / max(1, objective)
  std::vector<NetworkState> states;  // one per scenario of the system
  SolveStats stats;
  std::string error;  // set on numerical failure propagation
};

// Supporting hyperplane of gamma >= w f^2 at flow f_hat:
// gamma >= 2 w f_hat f - w f_hat^2. Valid for every point of the cone (and of
// the rotated cone given z <= 1, gamma >= 0), tight at f_hat.
LinearRow oa_cut(const ConicRow& cone, double f_hat);

// Best-first branch and cut over the direction/build binaries with outer
// approximation of the conic rows and physics verification of integral
// incumbents; unverifiable incumbents are excluded with no-good rows.
SolveResult solve(const ConstraintSystem& system, const SolverOptions& opts = {});

struct VerifyOutcome {
  bool verified = false;
  std::string reason;
  std::vector<NetworkState> states;
};

// Physics verification of an integral relaxation point: for every scenario
// block, a damped-Newton solve of the true nonlinear equations with the
// relaxation's slack pressures, supplies and boosts as anchors/seeds, plus an
// exact common-pressure-shift search per profile and boost adjustment within
// bounds. Exposed for tests; solve() calls it internally.
VerifyOutcome incumbent_verify(const ConstraintSystem& system,
                               const std::vector<double>& x,
                               const ExpansionPlan& plan);

}  // namespace gasplan
