// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gasplan/constraint_system.hpp"
#include "gasplan/network.hpp"
#include "gasplan/uncertainty.hpp"

namespace gasplan {

// A converged steady-state operating point for one scenario.
struct NetworkState {
  std::string scenario_id;
  std::map<std::string, double> pi;         // node -> squared pressure (Pa^2)
  std::map<std::string, double> flow;       // arc -> mass flow (kg/s)
  std::map<std::string, double> supply;     // receipt node -> production (kg/s)
  std::map<std::string, double> boost;      // compressor -> squared-pressure boost
  std::map<std::string, int> direction;     // arc -> 1 forward, 0 reverse
};

enum class PhysicsStatus { kVerified, kInfeasible, kNoConverge };

struct PhysicsResult {
  PhysicsStatus status = PhysicsStatus::kNoConverge;
  NetworkState state;
  std::string reason;  // populated unless verified
};

// Inputs of one steady-state solve over the built subgraph.
struct SteadyStateProblem {
  const Network* net = nullptr;
  ExpansionPlan plan;
  Scenario scenario;
  // Compressor orientation decisions, by compressor id: 1 = along orientation
  // (boost active), 0 = reverse (passive). Missing entries default to 1.
  std::map<std::string, int> compressor_direction;
  // Initial / fixed squared-pressure boosts by compressor id (>= 0). In
  // policy mode these are a starting point and are adjusted within bounds to
  // satisfy pressure and ratio limits; otherwise they are held fixed.
  std::map<std::string, double> boost;
  bool adjust_boosts = false;
  // Anchored squared pressures at slack nodes. Required: every component with
  // nonzero demand must contain at least one anchored node.
  std::map<std::string, double> slack_pressure_sq;
  // Fixed production at non-slack receipt nodes (kg/s). Missing -> 0.
  std::map<std::string, double> fixed_supply;
  // Optional warm start for squared pressures.
  std::map<std::string, double> initial_pi;
  // Allow a common additive shift of all squared pressures of the state when
  // checking bounds (the flow equations depend only on differences, so the
  // shifted state is equally physical). Shift bounds are solved exactly.
  bool allow_pressure_shift = false;
};

// Damped-Newton solve of the nodal equations in squared pressure, followed by
// bound checks (pressure, flow, compressor limits, supply). Convergence to
// 1e-12 relative residual; non-convergence is reported distinctly from bound
// infeasibility.
PhysicsResult steady_state_solve(const SteadyStateProblem& problem);

// True iff some direction assignment and operating state make the plan serve
// the scenario. Searches directions through the relaxation (fix_plan + solve
// with constant objective) and verifies with steady_state_solve.
bool feasibility(const Network& net, const ExpansionPlan& plan,
                 const Scenario& scenario, CompressorPolicy policy);

// Per-node pressure-ordering report between a low-demand and a high-demand
// solve under identical slack pressures and identical boosts.
struct MonotonicityReport {
  bool solved = false;
  std::string failure;            // set when a solve failed
  bool pressure_ordering = true;  // pi_low >= pi_high at every node
  bool ratio_ordering = true;     // alpha_low <= alpha_high per compressor
  double worst_pressure_violation = 0.0;  // relative
  std::map<std::string, double> pi_low, pi_high;
};

MonotonicityReport monotonicity_check(const Network& net, const ExpansionPlan& plan,
                                      CompressorPolicy policy,
                                      const Scenario& scenario_low,
                                      const Scenario& scenario_high);

// Interval of additive squared-pressure shifts under which the state stays
// within pressure and compression-ratio bounds (flows are shift-invariant).
// Empty is returned as (lo > hi).
std::pair<double, double> pressure_shift_interval(const Network& net,
                                                  const NetworkState& state);

void apply_pressure_shift(NetworkState& state, double c);

// Bound check of a converged state (pressure, flow, compressor consistency,
// supply); returns an empty string when the state verifies.
std::string check_state(const Network& net, const NetworkState& state);

}  // namespace gasplan
