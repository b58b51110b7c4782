// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// Small fixture networks shared across test files.
#pragma once

#include <memory>

#include "gasplan/network.hpp"

namespace gasplan::testing {

inline Node make_node(std::string id, double pi_min_bar, double pi_max_bar,
                      double demand = 0.0) {
  Node n;
  n.id = std::move(id);
  const double lo = pi_min_bar * 1e5, hi = pi_max_bar * 1e5;
  n.pressure_sq_min = lo * lo;
  n.pressure_sq_max = hi * hi;
  n.nominal_demand = demand;
  n.is_delivery = demand > 0.0;
  return n;
}

inline Node make_source(std::string id, double pi_min_bar, double pi_max_bar,
                        double supply_max = kInf) {
  Node n = make_node(std::move(id), pi_min_bar, pi_max_bar);
  n.is_receipt = true;
  n.supply_max = supply_max;
  return n;
}

inline Pipe make_pipe(std::string id, std::string from, std::string to,
                      double length_m, double diameter_m, double flow_max,
                      ComponentStatus status = ComponentStatus::kExisting) {
  Pipe p;
  p.id = std::move(id);
  p.from = std::move(from);
  p.to = std::move(to);
  p.length = length_m;
  p.diameter = diameter_m;
  p.friction_factor = 0.0035;
  p.flow_max = flow_max;
  p.status = status;
  return p;
}

inline Compressor make_comp(std::string id, std::string from, std::string to,
                            double ratio_sq_max, double flow_max,
                            ComponentStatus status = ComponentStatus::kExisting) {
  Compressor c;
  c.id = std::move(id);
  c.from = std::move(from);
  c.to = std::move(to);
  c.ratio_sq_min = 1.0;
  c.ratio_sq_max = ratio_sq_max;
  c.flow_max = flow_max;
  c.status = status;
  c.length = 1000.0;
  c.diameter = 0.5;
  return c;
}

// Two nodes, one existing pipe, source anchors the pressure.
inline std::shared_ptr<const Network> two_node_line(double demand = 5.0,
                                                    double flow_max = 50.0) {
  std::vector<Node> nodes{make_source("n1", 40, 70), make_node("n2", 25, 70, demand)};
  std::vector<Pipe> pipes{make_pipe("p1", "n1", "n2", 20000, 0.6, flow_max)};
  return std::make_shared<const Network>(Network(
      "two-node", std::move(nodes), std::move(pipes), {}, {"n1"}, 350.0));
}

}  // namespace gasplan::testing
