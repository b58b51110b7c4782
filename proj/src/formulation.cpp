// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/constraint_system.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace gasplan {

const char* var_kind_name(VarKind k) {
  switch (k) {
    case VarKind::kPressureSq: return "pi";
    case VarKind::kFlow: return "flow";
    case VarKind::kSupply: return "supply";
    case VarKind::kGamma: return "gamma";
    case VarKind::kBoost: return "eta";
    case VarKind::kDirection: return "y";
    case VarKind::kBuild: return "z";
  }
  return "?";
}

int ConstraintSystem::find_variable(VarKind kind, const std::string& owner,
                                    int scenario) const {
  auto it = index_.find({static_cast<int>(kind), owner, scenario});
  return it == index_.end() ? -1 : it->second;
}

struct SystemBuilder {
  ConstraintSystem& sys;

  int ensure_var(VarKind kind, const std::string& owner, int scenario,
                 double lo, double hi, bool binary) {
    int existing = sys.find_variable(kind, owner, scenario);
    if (existing >= 0) return existing;
    int idx = static_cast<int>(sys.variables.size());
    sys.variables.push_back({kind, owner, scenario, lo, hi, binary});
    sys.index_[{static_cast<int>(kind), owner, scenario}] = idx;
    return idx;
  }

  void add_row(LinearRow row) { sys.rows.push_back(std::move(row)); }

  void add_row(std::vector<std::pair<int, double>> coeffs, char sense, double rhs,
               std::string tag, std::string owner, int scenario) {
    sys.rows.push_back({std::move(coeffs), sense, rhs, std::move(tag),
                        std::move(owner), scenario});
  }
};

std::vector<LinearRow> mccormick_rows(int pi_i, int pi_j, int y, int gamma,
                                      double pi_i_min, double pi_i_max,
                                      double pi_j_min, double pi_j_max) {
  const double lo_span = pi_i_min - pi_j_max;  // most negative pi_i - pi_j
  const double hi_span = pi_i_max - pi_j_min;  // most positive pi_i - pi_j
  std::vector<LinearRow> rows(4);
  // gamma >= pi_j - pi_i + 2 y lo_span
  rows[0] = {{{gamma, 1.0}, {pi_i, 1.0}, {pi_j, -1.0}, {y, -2.0 * lo_span}},
             'G', 0.0, "env1", "", -1};
  // gamma >= pi_i - pi_j + 2 (y - 1) hi_span
  rows[1] = {{{gamma, 1.0}, {pi_i, -1.0}, {pi_j, 1.0}, {y, -2.0 * hi_span}},
             'G', -2.0 * hi_span, "env2", "", -1};
  // gamma <= pi_j - pi_i + 2 y hi_span
  rows[2] = {{{gamma, 1.0}, {pi_i, 1.0}, {pi_j, -1.0}, {y, -2.0 * hi_span}},
             'L', 0.0, "env3", "", -1};
  // gamma <= pi_i - pi_j + 2 (y - 1) lo_span
  rows[3] = {{{gamma, 1.0}, {pi_i, -1.0}, {pi_j, 1.0}, {y, -2.0 * lo_span}},
             'L', -2.0 * lo_span, "env4", "", -1};
  return rows;
}

namespace {

void emit_scenario_block(SystemBuilder& b, const Network& net,
                         const Scenario& scenario, CompressorPolicy policy,
                         int scen) {
  // Sorted owner ids give the canonical (scenario, kind, owner) variable order.
  std::vector<const Node*> nodes_sorted;
  for (const auto& n : net.nodes()) nodes_sorted.push_back(&n);
  std::sort(nodes_sorted.begin(), nodes_sorted.end(),
            [](const Node* a, const Node* b) { return a->id < b->id; });

  struct Arc {
    std::string id, from, to;
    double flow_max;
    bool is_pipe;
    int index;  // into pipes() / compressors()
    bool candidate;
  };
  std::vector<Arc> arcs;
  for (int i = 0; i < static_cast<int>(net.pipes().size()); ++i) {
    const auto& p = net.pipes()[i];
    arcs.push_back({p.id, p.from, p.to, p.flow_max, true, i,
                    p.status == ComponentStatus::kCandidate});
  }
  for (int i = 0; i < static_cast<int>(net.compressors().size()); ++i) {
    const auto& c = net.compressors()[i];
    arcs.push_back({c.id, c.from, c.to, c.flow_max, false, i,
                    c.status == ComponentStatus::kCandidate});
  }
  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& a, const Arc& b) { return a.id < b.id; });

  for (const Node* n : nodes_sorted)
    b.ensure_var(VarKind::kPressureSq, n->id, scen, n->pressure_sq_min,
                 n->pressure_sq_max, false);
  for (const Arc& a : arcs)
    b.ensure_var(VarKind::kFlow, a.id, scen, -a.flow_max, a.flow_max, false);
  for (const Node* n : nodes_sorted)
    if (n->is_receipt)
      b.ensure_var(VarKind::kSupply, n->id, scen, n->supply_min, n->supply_max,
                   false);
  for (const Arc& a : arcs) {
    if (!a.is_pipe) continue;
    const Node& ni = net.node(a.from);
    const Node& nj = net.node(a.to);
    double gmax = std::max({ni.pressure_sq_max - nj.pressure_sq_min,
                            nj.pressure_sq_max - ni.pressure_sq_min, 0.0});
    b.ensure_var(VarKind::kGamma, a.id, scen, 0.0, gmax, false);
  }
  if (policy == CompressorPolicy::kMonotone)
    for (const Arc& a : arcs) {
      if (a.is_pipe) continue;
      const Node& ni = net.node(a.from);
      const Node& nj = net.node(a.to);
      double eta_max = std::max(0.0, nj.pressure_sq_max - ni.pressure_sq_min);
      b.ensure_var(VarKind::kBoost, a.id, scen, 0.0, eta_max, false);
    }
  for (const Arc& a : arcs)
    b.ensure_var(VarKind::kDirection, a.id, scen, 0.0, 1.0, true);

  // Rows. Pipes first, then compressors, then balances, in sorted arc order.
  for (const Arc& a : arcs) {
    const Node& ni = net.node(a.from);
    const Node& nj = net.node(a.to);
    int pi_i = b.sys.find_variable(VarKind::kPressureSq, a.from, scen);
    int pi_j = b.sys.find_variable(VarKind::kPressureSq, a.to, scen);
    int f = b.sys.find_variable(VarKind::kFlow, a.id, scen);
    int y = b.sys.find_variable(VarKind::kDirection, a.id, scen);
    int z = a.candidate ? b.sys.find_variable(VarKind::kBuild, a.id, -1) : -1;
    const double fmax = a.flow_max;

    if (a.is_pipe) {
      int gamma = b.sys.find_variable(VarKind::kGamma, a.id, scen);
      auto env = mccormick_rows(pi_i, pi_j, y, gamma, ni.pressure_sq_min,
                                ni.pressure_sq_max, nj.pressure_sq_min,
                                nj.pressure_sq_max);
      for (auto& r : env) {
        r.owner = a.id;
        r.scenario = scen;
        b.add_row(std::move(r));
      }
      b.add_row({{f, 1.0}, {y, -fmax}}, 'G', -fmax, "dirflow.lo", a.id, scen);
      b.add_row({{f, 1.0}, {y, -fmax}}, 'L', 0.0, "dirflow.hi", a.id, scen);
      const double w = net.pipe_resistance(a.index);
      if (a.candidate) {
        b.add_row({{f, 1.0}, {z, fmax}}, 'G', 0.0, "buildflow.lo", a.id, scen);
        b.add_row({{f, 1.0}, {z, -fmax}}, 'L', 0.0, "buildflow.hi", a.id, scen);
        b.sys.cones.push_back({true, gamma, f, z, w, a.id, scen});
      } else {
        b.sys.cones.push_back({false, gamma, f, -1, w, a.id, scen});
      }
    } else {
      const Compressor& c = net.compressors()[a.index];
      const double rlo = c.ratio_sq_min, rhi = c.ratio_sq_max;
      const double lo_span = ni.pressure_sq_min - nj.pressure_sq_max;
      const double hi_span = ni.pressure_sq_max - nj.pressure_sq_min;
      const double bmin_slack = nj.pressure_sq_min - rlo * ni.pressure_sq_max;
      const double bmax_slack = nj.pressure_sq_max - rhi * ni.pressure_sq_min;
      if (!a.candidate) {
        // Passive equality activates at reverse flow (y = 0).
        b.add_row({{pi_i, 1.0}, {pi_j, -1.0}, {y, -lo_span}}, 'G', 0.0,
                  "comp_passive.lo", a.id, scen);
        b.add_row({{pi_i, 1.0}, {pi_j, -1.0}, {y, -hi_span}}, 'L', 0.0,
                  "comp_passive.hi", a.id, scen);
        b.add_row({{pi_i, rlo}, {pi_j, -1.0}, {y, -bmin_slack}}, 'L', -bmin_slack,
                  "comp_boost_min", a.id, scen);
        b.add_row({{pi_j, 1.0}, {pi_i, -rhi}, {y, bmax_slack}}, 'L', bmax_slack,
                  "comp_boost_max", a.id, scen);
        b.add_row({{f, 1.0}, {y, -fmax}}, 'G', -fmax, "dirflow.lo", a.id, scen);
        b.add_row({{f, 1.0}, {y, -fmax}}, 'L', 0.0, "dirflow.hi", a.id, scen);
      } else {
        // Activation coefficient (1 + y - z): equality binds only when the
        // compressor is built and the flow is reversed.
        b.add_row({{pi_i, 1.0}, {pi_j, -1.0}, {y, -lo_span}, {z, lo_span}}, 'G',
                  lo_span, "comp_passive.lo", a.id, scen);
        b.add_row({{pi_i, 1.0}, {pi_j, -1.0}, {y, -hi_span}, {z, hi_span}}, 'L',
                  hi_span, "comp_passive.hi", a.id, scen);
        // Ratio limits activate only when built and forward: (2 - y - z).
        b.add_row({{pi_i, rlo}, {pi_j, -1.0}, {y, -bmin_slack}, {z, -bmin_slack}},
                  'L', -2.0 * bmin_slack, "comp_boost_min", a.id, scen);
        b.add_row({{pi_j, 1.0}, {pi_i, -rhi}, {y, bmax_slack}, {z, bmax_slack}},
                  'L', 2.0 * bmax_slack, "comp_boost_max", a.id, scen);
        b.add_row({{f, 1.0}, {y, -fmax}}, 'G', -fmax, "dirflow.lo", a.id, scen);
        b.add_row({{f, 1.0}, {y, -fmax}}, 'L', 0.0, "dirflow.hi", a.id, scen);
        b.add_row({{f, 1.0}, {z, fmax}}, 'G', 0.0, "buildflow.lo", a.id, scen);
        b.add_row({{f, 1.0}, {z, -fmax}}, 'L', 0.0, "buildflow.hi", a.id, scen);
      }
      if (policy == CompressorPolicy::kMonotone) {
        int eta = b.sys.find_variable(VarKind::kBoost, a.id, scen);
        if (!a.candidate) {
          b.add_row({{pi_j, 1.0}, {pi_i, -1.0}, {eta, -1.0}}, 'E', 0.0, "policy",
                    a.id, scen);
        } else {
          const double eta_max = std::max(0.0, nj.pressure_sq_max - ni.pressure_sq_min);
          const double m_hi = std::max(0.0, nj.pressure_sq_max - ni.pressure_sq_min);
          const double m_lo =
              std::max(0.0, ni.pressure_sq_max - nj.pressure_sq_min + eta_max);
          b.add_row({{pi_j, 1.0}, {pi_i, -1.0}, {eta, -1.0}, {z, m_hi}}, 'L', m_hi,
                    "policy.hi", a.id, scen);
          b.add_row({{pi_j, 1.0}, {pi_i, -1.0}, {eta, -1.0}, {z, -m_lo}}, 'G', -m_lo,
                    "policy.lo", a.id, scen);
        }
      }
    }
  }

  // Nodal balance: sum(out) - sum(in) - supply = -demand.
  for (const Node* n : nodes_sorted) {
    std::vector<std::pair<int, double>> coeffs;
    for (const Arc& a : arcs) {
      int f = b.sys.find_variable(VarKind::kFlow, a.id, scen);
      if (a.from == n->id) coeffs.push_back({f, 1.0});
      else if (a.to == n->id) coeffs.push_back({f, -1.0});
    }
    if (n->is_receipt) {
      int s = b.sys.find_variable(VarKind::kSupply, n->id, scen);
      coeffs.push_back({s, -1.0});
    }
    b.add_row(std::move(coeffs), 'E', -scenario.demand(n->id), "balance", n->id,
              scen);
  }
}

void ensure_build_vars(SystemBuilder& b, const Network& net, bool with_objective) {
  auto ids = net.candidate_ids();
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) {
    int z = b.ensure_var(VarKind::kBuild, id, -1, 0.0, 1.0, true);
    if (with_objective) b.sys.objective[z] = net.candidate_cost(id);
  }
}

void check_scenario(const Network& net, const Scenario& s) {
  for (const auto& [node, d] : s.demands) {
    int idx = net.node_index(node);
    if (idx < 0)
      throw ValidationError("scenario " + s.scenario_id +
                            ": demand at unknown node " + node);
    if (d != 0.0 && !net.nodes()[idx].is_delivery)
      throw ValidationError("scenario " + s.scenario_id +
                            ": demand at non-delivery node " + node);
  }
}

}  // namespace

ConstraintSystem build_scenario_block(std::shared_ptr<const Network> net,
                                      const Scenario& scenario,
                                      CompressorPolicy policy) {
  ConstraintSystem sys;
  sys.network = net;
  sys.policy = policy;
  check_scenario(*net, scenario);
  SystemBuilder b{sys};
  ensure_build_vars(b, *net, /*with_objective=*/false);
  sys.scenarios.push_back({scenario.scenario_id, scenario.profile_id, scenario.demands});
  emit_scenario_block(b, *net, scenario, policy, 0);
  return sys;
}

ConstraintSystem build_robust_model(std::shared_ptr<const Network> net,
                                    const ScenarioSet& set, CompressorPolicy policy,
                                    bool use_extremal,
                                    const std::vector<Scenario>* explicit_scenarios) {
  ConstraintSystem sys;
  sys.network = net;
  sys.policy = policy;
  SystemBuilder b{sys};
  ensure_build_vars(b, *net, /*with_objective=*/true);

  std::vector<Scenario> scenarios;
  if (use_extremal) {
    if (set.profiles.empty())
      throw ValidationError("robust model requires at least one profile");
    for (const auto& p : set.profiles) {
      validate_profile(p);
      auto [lo, hi] = extremal_scenarios(p);
      scenarios.push_back(std::move(lo));
      scenarios.push_back(std::move(hi));
    }
  } else {
    if (explicit_scenarios == nullptr || explicit_scenarios->empty())
      throw ValidationError("explicit scenario list required when use_extremal=false");
    scenarios = *explicit_scenarios;
  }

  for (int s = 0; s < static_cast<int>(scenarios.size()); ++s) {
    check_scenario(*net, scenarios[s]);
    sys.scenarios.push_back(
        {scenarios[s].scenario_id, scenarios[s].profile_id, scenarios[s].demands});
    emit_scenario_block(b, *net, scenarios[s], policy, s);
  }

  // Anchor slack pressures across all blocks of the same profile.
  for (int s1 = 0; s1 < static_cast<int>(scenarios.size()); ++s1) {
    for (int s2 = s1 + 1; s2 < static_cast<int>(scenarios.size()); ++s2) {
      if (scenarios[s1].profile_id != scenarios[s2].profile_id) continue;
      for (const auto& g : net->slack_nodes()) {
        int a = sys.find_variable(VarKind::kPressureSq, g, s1);
        int c = sys.find_variable(VarKind::kPressureSq, g, s2);
        b.add_row({{a, 1.0}, {c, -1.0}}, 'E', 0.0, "slack_link", g, s2);
      }
      break;  // chain consecutive blocks; transitivity links the rest
    }
  }
  return sys;
}

ConstraintSystem build_deterministic_model(std::shared_ptr<const Network> net,
                                           const Scenario& scenario,
                                           CompressorPolicy policy) {
  ConstraintSystem sys;
  sys.network = net;
  sys.policy = policy;
  check_scenario(*net, scenario);
  SystemBuilder b{sys};
  ensure_build_vars(b, *net, /*with_objective=*/true);
  sys.scenarios.push_back({scenario.scenario_id, scenario.profile_id, scenario.demands});
  emit_scenario_block(b, *net, scenario, policy, 0);
  return sys;
}

ExpansionPlan make_plan(const Network& net, std::vector<std::string> built) {
  std::sort(built.begin(), built.end());
  built.erase(std::unique(built.begin(), built.end()), built.end());
  ExpansionPlan plan;
  plan.built = std::move(built);
  for (const auto& id : plan.built) {
    if (!net.is_candidate(id))
      throw ValidationError("plan contains non-candidate id: " + id);
    plan.cost += net.candidate_cost(id);
  }
  return plan;
}

ConstraintSystem fix_plan(const ConstraintSystem& system, const ExpansionPlan& plan) {
  ConstraintSystem out = system;
  for (const auto& id : plan.built)
    if (out.find_variable(VarKind::kBuild, id, -1) < 0)
      throw ValidationError("fix_plan: unknown candidate id " + id);
  for (int v = 0; v < static_cast<int>(out.variables.size()); ++v) {
    auto& var = out.variables[v];
    if (var.kind != VarKind::kBuild) continue;
    bool built = std::binary_search(plan.built.begin(), plan.built.end(), var.owner);
    var.lower = var.upper = built ? 1.0 : 0.0;
  }
  out.objective.clear();
  out.objective_constant = plan.cost;
  return out;
}

BlockCensus census(const ConstraintSystem& system, int scenario) {
  BlockCensus c;
  const Network& net = *system.network;
  std::map<std::string, std::map<std::string, int>> comp_rows;  // comp id -> tag -> n
  for (const auto& row : system.rows) {
    if (row.scenario != scenario) continue;
    c.raw_rows++;
    std::string base = row.tag.substr(0, row.tag.find('.'));
    if (base == "env1" || base == "env2" || base == "env3" || base == "env4") {
      c.mccormick++;
    } else if (base == "balance") {
      c.balance++;
    } else if (base == "policy") {
      comp_rows[row.owner][base]++;
    } else if (base == "comp_passive" || base == "comp_boost_min" ||
               base == "comp_boost_max") {
      comp_rows[row.owner][base]++;
    } else if (base == "dirflow" || base == "buildflow") {
      // Compressor direction/build rows count toward its form census; the
      // pipe ones belong to the envelope family's plumbing and are not
      // census-tracked.
      for (const auto& comp : net.compressors())
        if (comp.id == row.owner) {
          comp_rows[row.owner][base]++;
          break;
        }
    }
  }
  for (const auto& comp : net.compressors()) {
    auto it = comp_rows.find(comp.id);
    if (it == comp_rows.end()) continue;
    const auto& tags = it->second;
    auto n = [&tags](const char* t) {
      auto f = tags.find(t);
      return f == tags.end() ? 0 : f->second;
    };
    if (comp.status == ComponentStatus::kExisting) {
      // passive pair, boost_min, boost_max, dirflow pair -> 4 forms
      c.compressor_forms += n("comp_passive") / 2 + (n("comp_boost_min") > 0) +
                            (n("comp_boost_max") > 0) + n("dirflow") / 2;
    } else {
      // passive sides count separately, plus boost_min/max, dirflow, buildflow
      c.compressor_forms += n("comp_passive") + (n("comp_boost_min") > 0) +
                            (n("comp_boost_max") > 0) + n("dirflow") / 2 +
                            n("buildflow") / 2;
    }
    if (n("policy") > 0)
      c.policy_forms += comp.status == ComponentStatus::kExisting
                            ? n("policy")
                            : n("policy") / 2;
  }
  for (const auto& cone : system.cones) {
    if (cone.scenario != scenario) continue;
    if (cone.rotated) c.rsoc++;
    else c.soc++;
  }
  return c;
}

void dump_model(const ConstraintSystem& system, std::ostream& out) {
  out << "# variables: " << system.variables.size()
      << ", rows: " << system.rows.size() << ", cones: " << system.cones.size()
      << "\n";
  for (int v = 0; v < static_cast<int>(system.variables.size()); ++v) {
    const auto& var = system.variables[v];
    out << "var " << v << " " << var_kind_name(var.kind) << "[" << var.owner;
    if (var.scenario >= 0) out << "; s" << var.scenario;
    out << "] in [" << var.lower << ", " << var.upper << "]"
        << (var.binary ? " binary" : "") << "\n";
  }
  auto var_name = [&system](int v) {
    const auto& var = system.variables[v];
    std::ostringstream s;
    s << var_kind_name(var.kind) << "[" << var.owner;
    if (var.scenario >= 0) s << ";s" << var.scenario;
    s << "]";
    return s.str();
  };
  for (const auto& row : system.rows) {
    out << row.tag << "(" << row.owner << "): ";
    bool first = true;
    for (const auto& [v, coef] : row.coeffs) {
      if (!first) out << " + ";
      out << coef << "*" << var_name(v);
      first = false;
    }
    out << (row.sense == 'L' ? " <= " : row.sense == 'G' ? " >= " : " == ")
        << row.rhs << "\n";
  }
  for (const auto& cone : system.cones) {
    out << (cone.rotated ? "rsoc" : "soc") << "(" << cone.owner << "): ";
    if (cone.rotated) out << var_name(cone.build) << " * ";
    out << var_name(cone.gamma) << " >= " << cone.w << " * " << var_name(cone.flow)
        << "^2\n";
  }
  out << "min";
  for (const auto& [v, cost] : system.objective) out << " + " << cost << "*" << var_name(v);
  if (system.objective_constant != 0.0) out << " + " << system.objective_constant;
  out << "\n";
}

std::string model_to_json(const ConstraintSystem& system) {
  nlohmann::ordered_json doc;
  doc["variables"] = nlohmann::ordered_json::array();
  for (const auto& var : system.variables) {
    nlohmann::ordered_json jv;
    jv["kind"] = var_kind_name(var.kind);
    jv["owner"] = var.owner;
    jv["scenario"] = var.scenario;
    if (var.lower == -kInf) jv["lower"] = nullptr;
    else jv["lower"] = var.lower;
    if (var.upper == kInf) jv["upper"] = nullptr;
    else jv["upper"] = var.upper;
    jv["binary"] = var.binary;
    doc["variables"].push_back(std::move(jv));
  }
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : system.rows) {
    nlohmann::ordered_json jr;
    jr["tag"] = row.tag;
    jr["owner"] = row.owner;
    jr["scenario"] = row.scenario;
    jr["sense"] = std::string(1, row.sense);
    jr["rhs"] = row.rhs;
    auto coeffs = nlohmann::ordered_json::array();
    for (const auto& [v, c] : row.coeffs) coeffs.push_back({v, c});
    jr["coeffs"] = std::move(coeffs);
    doc["rows"].push_back(std::move(jr));
  }
  doc["cones"] = nlohmann::ordered_json::array();
  for (const auto& cone : system.cones) {
    nlohmann::ordered_json jc;
    jc["form"] = cone.rotated ? "rsoc" : "soc";
    jc["gamma"] = cone.gamma;
    jc["flow"] = cone.flow;
    if (cone.rotated) jc["build"] = cone.build;
    jc["w"] = cone.w;
    jc["owner"] = cone.owner;
    jc["scenario"] = cone.scenario;
    doc["cones"].push_back(std::move(jc));
  }
  doc["objective"] = nlohmann::ordered_json::object();
  for (const auto& [v, c] : system.objective)
    doc["objective"][std::to_string(v)] = c;
  doc["objective_constant"] = system.objective_constant;
  return doc.dump(2) + "\n";
}

}  // namespace gasplan
