// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gasplan/common.hpp"

namespace gasplan {

// Thrown by the instance loader and other input validation with a path into
// the offending document, e.g. "pipes[3].diameter: must be positive".
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

enum class ComponentStatus { kExisting, kCandidate };

// Squared pressures (Pa^2) are the working pressure variables everywhere;
// plain pressure never enters a computation.
struct Node {
  std::string id;
  double pressure_sq_min = 0.0;  // Pa^2
  double pressure_sq_max = 0.0;  // Pa^2
  bool is_generation = false;    // slack set: pressure anchored across scenarios
  bool is_receipt = false;       // may produce gas
  bool is_delivery = false;      // may withdraw gas
  double nominal_demand = 0.0;   // kg/s, >0 only at delivery nodes
  double supply_min = 0.0;       // kg/s
  double supply_max = kInf;      // kg/s
};

struct Pipe {
  std::string id;
  std::string from;
  std::string to;
  double length = 0.0;           // m
  double diameter = 0.0;         // m
  double friction_factor = 0.0;  // dimensionless
  double flow_max = 0.0;         // kg/s (symmetric bound)
  ComponentStatus status = ComponentStatus::kExisting;
  std::optional<double> build_cost;  // candidates only; overrides the cost model
};

// Compressors are zero-length, zero-resistance arcs oriented from->to that can
// boost squared pressure by a factor in [ratio_sq_min, ratio_sq_max] when flow
// runs along the orientation, and are passive (no boost) under reverse flow.
// length/diameter exist only to feed the construction cost model.
struct Compressor {
  std::string id;
  std::string from;
  std::string to;
  double ratio_sq_min = 1.0;
  double ratio_sq_max = 1.0;
  double flow_max = 0.0;  // kg/s
  ComponentStatus status = ComponentStatus::kExisting;
  std::optional<double> build_cost;
  double length = 0.0;    // m, cost model only
  double diameter = 0.0;  // m, cost model only
};

// Resistance factor of a pipe: 4*beta*length*a^2 / (pi^2 * D^5), in
// Pa^2 s^2 / kg^2. Rejects non-positive diameter or length.
double resistance(const Pipe& pipe, double sound_speed);

// Construction cost of a candidate component. Uses the explicit build_cost
// override when present; otherwise length * (1.04081e-6 * D_mm^2.5 + 11.2155)
// with the diameter converted to millimetres (the constant is tied to the mm
// convention of the source cost study; geometry is stored in SI).
double expansion_cost(const Pipe& pipe);
double expansion_cost(const Compressor& comp);

struct Finding {
  std::string code;     // stable machine key, e.g. "pressure_bounds"
  std::string where;    // offending entity id or document path
  std::string message;  // human-readable description
};

// Immutable after load; safe to share read-only across threads.
class Network {
 public:
  Network() = default;
  Network(std::string name, std::vector<Node> nodes, std::vector<Pipe> pipes,
          std::vector<Compressor> compressors, std::vector<std::string> slack_nodes,
          double sound_speed);

  const std::string& name() const { return name_; }
  double sound_speed() const { return sound_speed_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Pipe>& pipes() const { return pipes_; }
  const std::vector<Compressor>& compressors() const { return compressors_; }
  const std::vector<std::string>& slack_nodes() const { return slack_nodes_; }

  int node_index(const std::string& id) const;  // -1 if unknown
  const Node& node(const std::string& id) const;
  bool is_slack(const std::string& id) const;

  // Cached derived quantities, precomputed on construction for valid inputs.
  double pipe_resistance(int pipe_index) const { return resistance_[pipe_index]; }
  double pipe_cost(int pipe_index) const { return pipe_cost_[pipe_index]; }
  double compressor_cost(int comp_index) const { return comp_cost_[comp_index]; }

  // Candidate component ids, in declaration order.
  std::vector<std::string> candidate_ids() const;
  // Build cost of a candidate by id; throws ValidationError for unknown ids.
  double candidate_cost(const std::string& id) const;
  bool is_candidate(const std::string& id) const;

 private:
  friend std::vector<Finding> validate(const Network&);
  std::string name_;
  double sound_speed_ = 350.0;
  std::vector<Node> nodes_;
  std::vector<Pipe> pipes_;
  std::vector<Compressor> compressors_;
  std::vector<std::string> slack_nodes_;
  std::map<std::string, int> node_index_;
  std::vector<double> resistance_;  // per pipe
  std::vector<double> pipe_cost_;   // per pipe (candidates; 0 for existing)
  std::vector<double> comp_cost_;   // per compressor
};

// Structural validation: type invariants plus connectivity of the existing
// subnetwork. Returns an empty list iff the network is well-formed. Findings
// are data, not errors; the loader turns them into ValidationError.
std::vector<Finding> validate(const Network& net);

}  // namespace gasplan
