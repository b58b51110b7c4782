// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gasplan/network.hpp"
#include "gasplan/uncertainty.hpp"

namespace gasplan {

// Variable kinds of the mixed-integer conic model. Build variables are
// scenario-free; everything else is indexed by scenario.
enum class VarKind : std::uint8_t {
  kPressureSq,  // squared nodal pressure (Pa^2)
  kFlow,        // arc mass flow (kg/s)
  kSupply,      // produced gas at a receipt node (kg/s)
  kGamma,       // |pressure-squared difference| carrier for pipe loss
  kBoost,       // compressor squared-pressure boost (policy mode)
  kDirection,   // binary flow direction per arc
  kBuild,       // binary expansion decision per candidate
};

const char* var_kind_name(VarKind k);

struct VariableInfo {
  VarKind kind;
  std::string owner;   // node or arc id
  int scenario;        // index into ConstraintSystem::scenarios, -1 for kBuild
  double lower = 0.0;
  double upper = 0.0;
  bool binary = false;
};

// One linear inequality/equality. Tags carry the row family for audits and
// the census; two-sided families are split into ".lo"/".hi" rows sharing a
// tag base. Families:
//   balance      nodal mass balance
//   env1..env4   envelope rows linking gamma, pressures and direction
//   dirflow      flow/direction linking (pipes and compressors)
//   buildflow    flow gated by the build decision (candidates)
//   comp_passive reverse-flow pressure equality activation
//   comp_boost_min / comp_boost_max   compression ratio limits
//   policy       non-decreasing boost policy rows
//   slack_link   cross-scenario pressure anchoring at slack nodes
//   nogood / oa  solver-generated rows
struct LinearRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  char sense = 'L';                            // 'L' <=, 'E' =, 'G' >=
  double rhs = 0.0;
  std::string tag;
  std::string owner;  // originating entity id (may be empty)
  int scenario = -1;
};

// gamma >= w f^2 (soc) or z gamma >= w f^2 (rsoc, candidates).
struct ConicRow {
  bool rotated = false;
  int gamma = -1;
  int flow = -1;
  int build = -1;  // rsoc only
  double w = 0.0;
  std::string owner;
  int scenario = -1;
};

struct ScenarioInfo {
  std::string scenario_id;
  std::string profile_id;
  std::map<std::string, double> demands;
};

enum class CompressorPolicy { kMonotone, kGeneral };

struct ConstraintSystem {
  std::shared_ptr<const Network> network;
  std::vector<VariableInfo> variables;
  std::vector<LinearRow> rows;
  std::vector<ConicRow> cones;
  std::map<int, double> objective;  // build-variable index -> cost
  double objective_constant = 0.0;
  std::vector<ScenarioInfo> scenarios;
  CompressorPolicy policy = CompressorPolicy::kMonotone;

  int find_variable(VarKind kind, const std::string& owner, int scenario) const;
  const VariableInfo& variable(int index) const { return variables[index]; }

 private:
  friend struct SystemBuilder;
  // (kind, owner, scenario) -> index, kept in sync by the builder.
  std::map<std::tuple<int, std::string, int>, int> index_;
};

// Row counts of one scenario block. Raw counts are emitted LinearRows; form
// counts collapse the two-sided families to one per printed form.
struct BlockCensus {
  int mccormick = 0;         // env1..env4 rows
  int soc = 0;               // conic rows, existing pipes
  int rsoc = 0;              // conic rows, candidate pipes
  int balance = 0;           // nodal balance rows
  int compressor_forms = 0;  // 4 per existing + 6 per candidate compressor
  int policy_forms = 0;      // 1 per compressor when the policy is monotone
  int raw_rows = 0;          // all LinearRows of the block
};

BlockCensus census(const ConstraintSystem& system, int scenario);

// The four envelope rows for gamma = (2y - 1)(pi_i - pi_j) given squared
// pressure bounds of the endpoints. Exact at binary y.
std::vector<LinearRow> mccormick_rows(int pi_i, int pi_j, int y, int gamma,
                                      double pi_i_min, double pi_i_max,
                                      double pi_j_min, double pi_j_max);

// One scenario block: variables with bounds, envelope + compressor +
// direction rows, conic rows, nodal balances, and (monotone policy) boost
// rows. No objective.
ConstraintSystem build_scenario_block(std::shared_ptr<const Network> net,
                                      const Scenario& scenario,
                                      CompressorPolicy policy);

// Full robust model: per profile either the two extremal scenario blocks
// (use_extremal) or one block per explicitly listed scenario; shared build
// variables; slack-node pressure equality across each profile's blocks;
// expansion-cost objective.
ConstraintSystem build_robust_model(std::shared_ptr<const Network> net,
                                    const ScenarioSet& set,
                                    CompressorPolicy policy,
                                    bool use_extremal,
                                    const std::vector<Scenario>* explicit_scenarios = nullptr);

// Single-scenario model with the expansion-cost objective and no coupling.
ConstraintSystem build_deterministic_model(std::shared_ptr<const Network> net,
                                           const Scenario& scenario,
                                           CompressorPolicy policy);

struct ExpansionPlan {
  std::vector<std::string> built;  // candidate ids, sorted
  double cost = 0.0;               // sum of the build costs of `built`
};

ExpansionPlan make_plan(const Network& net, std::vector<std::string> built);

// Pin the build variables to the plan (bounds [v,v]) and replace the
// objective by the constant plan cost. Throws for unknown candidate ids.
ConstraintSystem fix_plan(const ConstraintSystem& system, const ExpansionPlan& plan);

// Human-readable listing (one row per line with tag) and machine-readable
// mirror of the system, for audit and differential testing.
void dump_model(const ConstraintSystem& system, std::ostream& out);
std::string model_to_json(const ConstraintSystem& system);

}  // namespace gasplan
