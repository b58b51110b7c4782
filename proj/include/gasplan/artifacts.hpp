// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gasplan/constraint_system.hpp"
#include "gasplan/network.hpp"
#include "gasplan/physics.hpp"
#include "gasplan/solver.hpp"
#include "gasplan/uncertainty.hpp"

namespace gasplan {

// Structured run artifacts. All output is deterministic for a fixed config
// and seed, except wall-clock timing fields (wall_ms), which are the one
// intentionally volatile value.

void write_plan_json(const std::string& path, const std::string& instance_name,
                     const std::string& mode, const std::string& policy,
                     const SolveResult& result, const std::string& note);

void write_solve_report(const std::string& path, const SolveResult& result);

ExpansionPlan load_plan_file(const std::string& path, const Network& net);

std::vector<DemandProfile> load_profiles_file(const std::string& path);
std::string serialize_profiles(const std::vector<DemandProfile>& profiles);

}  // namespace gasplan
