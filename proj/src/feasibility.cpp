// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/physics.hpp"
#include "gasplan/solver.hpp"

namespace gasplan {

// Can the plan serve the scenario at all? Directions, boosts, supplies and
// slack pressures are all recourse: pin the plan, solve the one-scenario
// relaxation with a constant objective and let incumbent verification do the
// physics. Any verified incumbent answers yes; an exhausted tree answers no.
bool feasibility(const Network& net, const ExpansionPlan& plan,
                 const Scenario& scenario, CompressorPolicy policy) {
  auto shared = std::make_shared<const Network>(net);
  ConstraintSystem sys = build_deterministic_model(shared, scenario, policy);
  ConstraintSystem fixed = fix_plan(sys, plan);
  SolverOptions opts;
  opts.node_limit = 20000;
  SolveResult res = solve(fixed, opts);
  return res.status == SolveStatus::kOptimal;
}

}  // namespace gasplan
