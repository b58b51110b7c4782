// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/uncertainty.hpp"

#include "gasplan/rng.hpp"

namespace gasplan {

std::pair<Scenario, Scenario> extremal_scenarios(const DemandProfile& profile) {
  Scenario low, high;
  low.profile_id = high.profile_id = profile.profile_id;
  low.scenario_id = profile.profile_id + ":low";
  high.scenario_id = profile.profile_id + ":high";
  for (const auto& [node, iv] : profile.intervals) {
    low.demands[node] = iv.first;
    high.demands[node] = iv.second;
  }
  return {std::move(low), std::move(high)};
}

DemandProfile scale_profile(const Network& net, double delta, double epsilon,
                            const std::string& profile_id) {
  if (!(delta > 0.0))
    throw ValidationError("scale_profile: delta must be positive");
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw ValidationError("scale_profile: epsilon must be in [0, 1)");
  DemandProfile p;
  p.profile_id = profile_id;
  for (const auto& n : net.nodes()) {
    if (!n.is_delivery || n.nominal_demand == 0.0) continue;
    const double center = delta * n.nominal_demand;
    p.intervals[n.id] = {center * (1.0 - epsilon), center * (1.0 + epsilon)};
  }
  return p;
}

Scenario center_scenario(const DemandProfile& profile) {
  Scenario s;
  s.profile_id = profile.profile_id;
  s.scenario_id = profile.profile_id + ":center";
  for (const auto& [node, iv] : profile.intervals)
    s.demands[node] = 0.5 * (iv.first + iv.second);
  return s;
}

std::vector<Scenario> sample(const DemandProfile& profile, int count,
                             std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample: count must be >= 1");
  Rng rng(split_seed(seed, "demand-sampling:" + profile.profile_id));
  std::vector<Scenario> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    Scenario s;
    s.profile_id = profile.profile_id;
    s.scenario_id = profile.profile_id + ":sample" + std::to_string(k);
    // intervals is an ordered map, so the draw order is the sorted node-id
    // order and is independent of construction history.
    for (const auto& [node, iv] : profile.intervals)
      s.demands[node] = rng.uniform(iv.first, iv.second);
    out.push_back(std::move(s));
  }
  return out;
}

void validate_profile(const DemandProfile& profile) {
  for (const auto& [node, iv] : profile.intervals) {
    if (iv.first < 0.0 || iv.first > iv.second)
      throw ValidationError("profile " + profile.profile_id + ", node " + node +
                            ": requires 0 <= low <= high");
  }
}

bool scenario_in_profile(const Scenario& s, const DemandProfile& p) {
  for (const auto& [node, d] : s.demands) {
    auto iv = p.interval(node);
    if (d < iv.first - 1e-12 || d > iv.second + 1e-12) return false;
  }
  for (const auto& [node, iv] : p.intervals) {
    if (!s.demands.count(node) && (iv.first > 1e-12)) return false;
  }
  return true;
}

}  // namespace gasplan
