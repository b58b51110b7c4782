// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gasplan/network.hpp"

namespace gasplan {

// Per-node demand interval box. Nodes absent from the map have the degenerate
// interval [0, 0].
struct DemandProfile {
  std::string profile_id;
  std::map<std::string, std::pair<double, double>> intervals;  // kg/s

  std::pair<double, double> interval(const std::string& node_id) const {
    auto it = intervals.find(node_id);
    return it == intervals.end() ? std::make_pair(0.0, 0.0) : it->second;
  }
};

// A point demand realization drawn from (or defining) a profile.
struct Scenario {
  std::string scenario_id;
  std::string profile_id;
  std::map<std::string, double> demands;  // kg/s

  double demand(const std::string& node_id) const {
    auto it = demands.find(node_id);
    return it == demands.end() ? 0.0 : it->second;
  }
};

struct ScenarioSet {
  std::vector<DemandProfile> profiles;
};

// The all-lower-bounds and all-upper-bounds corners of the box. Feasibility at
// both (with anchored slack pressures) covers the whole box under a
// non-decreasing compressor policy.
std::pair<Scenario, Scenario> extremal_scenarios(const DemandProfile& profile);

// Box of half-width epsilon (relative) centered on delta-scaled nominal
// demands: delivery nodes get [delta*(1-eps)*nominal, delta*(1+eps)*nominal],
// everything else [0, 0].
DemandProfile scale_profile(const Network& net, double delta, double epsilon,
                            const std::string& profile_id = "k0");

// The profile's center point (the deterministic planning scenario).
Scenario center_scenario(const DemandProfile& profile);

// count scenarios, each coordinate drawn independently uniformly from its
// interval; bit-reproducible for a fixed seed.
std::vector<Scenario> sample(const DemandProfile& profile, int count,
                             std::uint64_t seed);

void validate_profile(const DemandProfile& profile);       // throws ValidationError
bool scenario_in_profile(const Scenario& s, const DemandProfile& p);

}  // namespace gasplan
