// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace gasplan {

double resistance(const Pipe& pipe, double sound_speed) {
  if (!(pipe.diameter > 0.0))
    throw ValidationError("pipe " + pipe.id + ": diameter must be positive");
  if (!(pipe.length > 0.0))
    throw ValidationError("pipe " + pipe.id + ": length must be positive");
  if (!(sound_speed > 0.0))
    throw ValidationError("sound_speed must be positive");
  const double d5 = std::pow(pipe.diameter, 5.0);
  return 4.0 * pipe.friction_factor * pipe.length * sound_speed * sound_speed /
         (std::numbers::pi * std::numbers::pi * d5);
}

namespace {

// length * (1.04081e-6 * D_mm^2.5 + 11.2155), geometry in SI on input.
double cost_model(const std::string& id, double length_m, double diameter_m,
                  const std::optional<double>& override_cost) {
  if (override_cost) return *override_cost;
  if (!(diameter_m > 0.0) || length_m < 0.0)
    throw ValidationError("candidate " + id +
                          ": geometry required when build_cost is absent");
  const double d_mm = diameter_m * 1000.0;
  return length_m * (1.04081e-6 * std::pow(d_mm, 2.5) + 11.2155);
}

}  // namespace

double expansion_cost(const Pipe& pipe) {
  return cost_model(pipe.id, pipe.length, pipe.diameter, pipe.build_cost);
}

double expansion_cost(const Compressor& comp) {
  return cost_model(comp.id, comp.length, comp.diameter, comp.build_cost);
}

Network::Network(std::string name, std::vector<Node> nodes, std::vector<Pipe> pipes,
                 std::vector<Compressor> compressors,
                 std::vector<std::string> slack_nodes, double sound_speed)
    : name_(std::move(name)),
      sound_speed_(sound_speed),
      nodes_(std::move(nodes)),
      pipes_(std::move(pipes)),
      compressors_(std::move(compressors)),
      slack_nodes_(std::move(slack_nodes)) {
  std::sort(slack_nodes_.begin(), slack_nodes_.end());
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
    node_index_.emplace(nodes_[i].id, i);
  for (auto& n : nodes_)
    if (is_slack(n.id)) n.is_generation = true;

  resistance_.resize(pipes_.size(), 0.0);
  pipe_cost_.resize(pipes_.size(), 0.0);
  for (std::size_t i = 0; i < pipes_.size(); ++i) {
    if (pipes_[i].diameter > 0.0 && pipes_[i].length > 0.0 && sound_speed_ > 0.0)
      resistance_[i] = resistance(pipes_[i], sound_speed_);
    if (pipes_[i].status == ComponentStatus::kCandidate &&
        (pipes_[i].build_cost || pipes_[i].diameter > 0.0))
      pipe_cost_[i] = expansion_cost(pipes_[i]);
  }
  comp_cost_.resize(compressors_.size(), 0.0);
  for (std::size_t i = 0; i < compressors_.size(); ++i)
    if (compressors_[i].status == ComponentStatus::kCandidate &&
        (compressors_[i].build_cost || compressors_[i].diameter > 0.0))
      comp_cost_[i] = expansion_cost(compressors_[i]);
}

int Network::node_index(const std::string& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? -1 : it->second;
}

const Node& Network::node(const std::string& id) const {
  int i = node_index(id);
  if (i < 0) throw ValidationError("unknown node id: " + id);
  return nodes_[i];
}

bool Network::is_slack(const std::string& id) const {
  return std::binary_search(slack_nodes_.begin(), slack_nodes_.end(), id);
}

std::vector<std::string> Network::candidate_ids() const {
  std::vector<std::string> out;
  for (const auto& p : pipes_)
    if (p.status == ComponentStatus::kCandidate) out.push_back(p.id);
  for (const auto& c : compressors_)
    if (c.status == ComponentStatus::kCandidate) out.push_back(c.id);
  return out;
}

bool Network::is_candidate(const std::string& id) const {
  for (const auto& p : pipes_)
    if (p.id == id) return p.status == ComponentStatus::kCandidate;
  for (const auto& c : compressors_)
    if (c.id == id) return c.status == ComponentStatus::kCandidate;
  return false;
}

double Network::candidate_cost(const std::string& id) const {
  for (std::size_t i = 0; i < pipes_.size(); ++i)
    if (pipes_[i].id == id && pipes_[i].status == ComponentStatus::kCandidate)
      return pipe_cost_[i];
  for (std::size_t i = 0; i < compressors_.size(); ++i)
    if (compressors_[i].id == id &&
        compressors_[i].status == ComponentStatus::kCandidate)
      return comp_cost_[i];
  throw ValidationError("unknown candidate id: " + id);
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<Finding> validate(const Network& net) {
  std::vector<Finding> out;
  auto add = [&out](std::string code, std::string where, std::string message) {
    out.push_back({std::move(code), std::move(where), std::move(message)});
  };

  std::set<std::string> node_ids, arc_ids;
  for (const auto& n : net.nodes()) {
    if (!node_ids.insert(n.id).second)
      add("duplicate_id", n.id, "duplicate node id");
    if (!(n.pressure_sq_min > 0.0) || n.pressure_sq_min > n.pressure_sq_max)
      add("pressure_bounds", n.id,
          "requires 0 < pressure_sq_min <= pressure_sq_max");
    if (n.nominal_demand < 0.0)
      add("demand_sign", n.id, "nominal_demand must be >= 0");
    if (n.nominal_demand > 0.0 && !n.is_delivery)
      add("demand_role", n.id, "nonzero nominal_demand at a non-delivery node");
    if (n.supply_max > 0.0 && !n.is_receipt && n.supply_max != kInf)
      add("supply_role", n.id, "finite positive supply_max at a non-receipt node");
    if (n.supply_min < 0.0 || n.supply_min > n.supply_max)
      add("supply_bounds", n.id, "requires 0 <= supply_min <= supply_max");
  }
  for (const auto& s : net.slack_nodes()) {
    if (!node_ids.count(s)) {
      add("unknown_node", s, "slack node is not a declared node");
    } else if (!net.node(s).is_receipt) {
      add("slack_role", s, "slack node must be a receipt point");
    }
  }

  auto check_arc = [&](const std::string& id, const std::string& from,
                       const std::string& to) {
    if (!arc_ids.insert(id).second) add("duplicate_id", id, "duplicate arc id");
    if (!node_ids.count(from))
      add("unknown_node", id, "references unknown node " + from);
    if (!node_ids.count(to))
      add("unknown_node", id, "references unknown node " + to);
    if (from == to) add("self_loop", id, "arc endpoints coincide");
  };

  for (const auto& p : net.pipes()) {
    check_arc(p.id, p.from, p.to);
    if (!(p.length > 0.0)) add("pipe_geometry", p.id, "length must be positive");
    if (!(p.diameter > 0.0)) add("pipe_geometry", p.id, "diameter must be positive");
    if (!(p.friction_factor > 0.0))
      add("pipe_geometry", p.id, "friction_factor must be positive");
    if (!(p.flow_max > 0.0)) add("flow_bound", p.id, "flow_max must be positive");
    if (p.status == ComponentStatus::kExisting && p.build_cost)
      add("cost_on_existing", p.id, "build_cost is only valid on candidates");
    if (p.status == ComponentStatus::kCandidate && p.build_cost && *p.build_cost < 0.0)
      add("cost_sign", p.id, "build_cost must be >= 0");
  }
  for (const auto& c : net.compressors()) {
    check_arc(c.id, c.from, c.to);
    if (!(c.ratio_sq_min >= 1.0) || c.ratio_sq_min > c.ratio_sq_max)
      add("ratio_bounds", c.id, "requires 1 <= ratio_sq_min <= ratio_sq_max");
    if (!(c.flow_max > 0.0)) add("flow_bound", c.id, "flow_max must be positive");
    if (c.status == ComponentStatus::kExisting && c.build_cost)
      add("cost_on_existing", c.id, "build_cost is only valid on candidates");
  }

  if (!(net.sound_speed() > 0.0))
    add("sound_speed", "", "sound_speed must be positive");

  // Existing-component connectivity (candidates are optional by definition).
  if (!net.nodes().empty()) {
    Dsu dsu(static_cast<int>(net.nodes().size()));
    auto unite = [&](const std::string& a, const std::string& b) {
      int ia = net.node_index(a), ib = net.node_index(b);
      if (ia >= 0 && ib >= 0) dsu.unite(ia, ib);
    };
    for (const auto& p : net.pipes())
      if (p.status == ComponentStatus::kExisting) unite(p.from, p.to);
    for (const auto& c : net.compressors())
      if (c.status == ComponentStatus::kExisting) unite(c.from, c.to);
    // Nodes reached only through candidate arcs are exempt: they exist to be
    // connected by an expansion.
    std::set<std::string> candidate_only;
    for (const auto& n : net.nodes()) candidate_only.insert(n.id);
    for (const auto& p : net.pipes())
      if (p.status == ComponentStatus::kExisting) {
        candidate_only.erase(p.from);
        candidate_only.erase(p.to);
      }
    for (const auto& c : net.compressors())
      if (c.status == ComponentStatus::kExisting) {
        candidate_only.erase(c.from);
        candidate_only.erase(c.to);
      }
    int root = -1;
    for (int i = 0; i < static_cast<int>(net.nodes().size()); ++i) {
      if (candidate_only.count(net.nodes()[i].id)) continue;
      if (root < 0) root = dsu.find(i);
      if (dsu.find(i) != root)
        add("disconnected", net.nodes()[i].id,
            "existing network does not connect this node");
    }
  }
  return out;
}

}  // namespace gasplan
