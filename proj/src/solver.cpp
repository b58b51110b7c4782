// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// Branch and cut for the mixed-integer conic expansion model. Conic rows are
// enforced through outer-approximation cuts (tangents of gamma >= w f^2);
// rotated rows are only separated once their build variable is integral,
// since the buildflow rows already force zero flow at z = 0 and the plain
// tangents are valid for z = 1. Cuts and no-good rows are globally valid, so
// the LP engine keeps one growing row set and nodes differ only in variable
// bounds.
#include "gasplan/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <stdexcept>

namespace gasplan {

namespace {
constexpr double kIntTol = 1e-6;
}

const char* solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kGapLimit: return "gap_limit";
    case SolveStatus::kNodeLimit: return "node_limit";
  }
  return "?";
}

LinearRow oa_cut(const ConicRow& cone, double f_hat) {
  LinearRow row;
  row.coeffs = {{cone.gamma, 1.0}, {cone.flow, -2.0 * cone.w * f_hat}};
  row.sense = 'G';
  row.rhs = -cone.w * f_hat * f_hat;
  row.tag = "oa";
  row.owner = cone.owner;
  row.scenario = cone.scenario;
  return row;
}

namespace {

LinearProgram to_lp(const ConstraintSystem& sys) {
  LinearProgram lp;
  lp.num_cols = static_cast<int>(sys.variables.size());
  lp.col_lower.resize(lp.num_cols);
  lp.col_upper.resize(lp.num_cols);
  lp.objective.assign(lp.num_cols, 0.0);
  for (int j = 0; j < lp.num_cols; ++j) {
    lp.col_lower[j] = sys.variables[j].lower;
    lp.col_upper[j] = sys.variables[j].upper;
  }
  for (const auto& [j, c] : sys.objective) lp.objective[j] = c;
  lp.rows.reserve(sys.rows.size());
  for (const auto& row : sys.rows) lp.rows.push_back({row.coeffs, row.sense, row.rhs});
  return lp;
}

struct Fixing {
  std::shared_ptr<const Fixing> parent;
  int var;
  double value;
};

struct TreeNode {
  double bound;
  std::int64_t id;
  int depth;
  std::shared_ptr<const Fixing> fixings;
};

struct NodeOrder {
  bool operator()(const TreeNode& a, const TreeNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

ExpansionPlan plan_from_point(const ConstraintSystem& sys, const std::vector<double>& x) {
  std::vector<std::string> built;
  for (int j = 0; j < static_cast<int>(sys.variables.size()); ++j) {
    const auto& v = sys.variables[j];
    if (v.kind == VarKind::kBuild && x[j] > 0.5) built.push_back(v.owner);
  }
  return make_plan(*sys.network, std::move(built));
}

}  // namespace

VerifyOutcome incumbent_verify(const ConstraintSystem& system,
                               const std::vector<double>& x,
                               const ExpansionPlan& plan) {
  VerifyOutcome out;
  const Network& net = *system.network;
  const int num_scen = static_cast<int>(system.scenarios.size());
  std::vector<NetworkState> states(num_scen);

  for (int s = 0; s < num_scen; ++s) {
    SteadyStateProblem prob;
    prob.net = &net;
    prob.plan = plan;
    prob.scenario.scenario_id = system.scenarios[s].scenario_id;
    prob.scenario.profile_id = system.scenarios[s].profile_id;
    prob.scenario.demands = system.scenarios[s].demands;
    for (const auto& n : net.nodes()) {
      int pi = system.find_variable(VarKind::kPressureSq, n.id, s);
      if (pi >= 0) prob.initial_pi[n.id] = x[pi];
      if (net.is_slack(n.id)) {
        if (pi >= 0) prob.slack_pressure_sq[n.id] = x[pi];
      } else if (n.is_receipt) {
        int sv = system.find_variable(VarKind::kSupply, n.id, s);
        if (sv >= 0) prob.fixed_supply[n.id] = x[sv];
      }
    }
    for (const auto& c : net.compressors()) {
      int y = system.find_variable(VarKind::kDirection, c.id, s);
      if (y < 0) continue;
      const int dir = x[y] > 0.5 ? 1 : 0;
      prob.compressor_direction[c.id] = dir;
      double eta = 0.0;
      int ev = system.find_variable(VarKind::kBoost, c.id, s);
      if (ev >= 0) {
        eta = std::max(0.0, x[ev]);
      } else if (dir == 1) {
        int pi_i = system.find_variable(VarKind::kPressureSq, c.from, s);
        int pi_j = system.find_variable(VarKind::kPressureSq, c.to, s);
        if (pi_i >= 0 && pi_j >= 0) eta = std::max(0.0, x[pi_j] - x[pi_i]);
      }
      prob.boost[c.id] = eta;
    }
    prob.adjust_boosts = true;
    prob.allow_pressure_shift = false;

    PhysicsResult res = steady_state_solve(prob);
    if (res.status == PhysicsStatus::kNoConverge) {
      // Retry from neutral pressures.
      prob.initial_pi.clear();
      res = steady_state_solve(prob);
    }
    if (res.status == PhysicsStatus::kNoConverge) {
      out.reason = "scenario " + system.scenarios[s].scenario_id + ": " + res.reason;
      return out;
    }
    states[s] = std::move(res.state);
  }

  // Common squared-pressure shift per profile: flows are shift-invariant and
  // the slack anchoring ties all blocks of one profile together.
  std::map<std::string, std::vector<int>> by_profile;
  for (int s = 0; s < num_scen; ++s)
    by_profile[system.scenarios[s].profile_id].push_back(s);
  for (const auto& [profile, members] : by_profile) {
    double lo = -kInf, hi = kInf;
    for (int s : members) {
      auto [slo, shi] = pressure_shift_interval(net, states[s]);
      lo = std::max(lo, slo);
      hi = std::min(hi, shi);
    }
    if (lo > hi) {
      for (int s : members) {
        std::string err = check_state(net, states[s]);
        if (!err.empty()) {
          out.reason = "scenario " + system.scenarios[s].scenario_id + ": " + err;
          return out;
        }
      }
      out.reason = "profile " + profile + ": no common feasible pressure shift";
      return out;
    }
    const double c = std::clamp(0.0, lo, hi);
    for (int s : members) apply_pressure_shift(states[s], c);
  }
  for (int s = 0; s < num_scen; ++s) {
    std::string err = check_state(net, states[s]);
    if (!err.empty()) {
      out.reason = "scenario " + system.scenarios[s].scenario_id + ": " + err;
      return out;
    }
  }
  out.verified = true;
  out.states = std::move(states);
  return out;
}

SolveResult solve(const ConstraintSystem& system, const SolverOptions& opts) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed_s = [&t0] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  SolveResult result;
  LpEngine engine(to_lp(system));

  std::vector<int> binaries;
  for (int j = 0; j < static_cast<int>(system.variables.size()); ++j)
    if (system.variables[j].binary &&
        system.variables[j].lower < system.variables[j].upper)
      binaries.push_back(j);

  // Seed tangents for existing-pipe cones at the flow bound; they are tight
  // where congestion lives and save early separation rounds.
  for (const auto& cone : system.cones) {
    if (cone.rotated) continue;
    const double fmax = system.variables[cone.flow].upper;
    if (fmax <= 0 || fmax == kInf) continue;
    for (double fh : {fmax, -fmax}) {
      LinearRow cut = oa_cut(cone, fh);
      engine.add_row({cut.coeffs, cut.sense, cut.rhs});
      result.stats.cuts++;
    }
  }

  double incumbent_obj = kInf;
  ExpansionPlan incumbent_plan;
  std::vector<NetworkState> incumbent_states;
  bool have_incumbent = false;

  std::priority_queue<TreeNode, std::vector<TreeNode>, NodeOrder> open;
  std::vector<TreeNode> plunge_stack;
  std::int64_t next_id = 0;
  open.push({-kInf, next_id++, 0, nullptr});
  double best_open_bound = -kInf;

  auto objective_of = [&](const ExpansionPlan& plan) {
    return system.objective.empty() ? system.objective_constant : plan.cost;
  };
  auto rel_gap = [](double obj, double bound) {
    if (obj == kInf) return kInf;
    return std::max(0.0, obj - bound) / std::max(1.0, std::fabs(obj));
  };

  auto apply_node_bounds = [&](const TreeNode& node) {
    for (int j : binaries)
      engine.set_col_bounds(j, system.variables[j].lower, system.variables[j].upper);
    for (const Fixing* f = node.fixings.get(); f != nullptr; f = f->parent.get())
      engine.set_col_bounds(f->var, f->value, f->value);
  };

  SolveStatus stop_status = SolveStatus::kOptimal;
  bool stopped = false;

  while (!open.empty() || !plunge_stack.empty()) {
    // Global bound from the open set (the node being processed is accounted
    // for by its own LP bound below).
    if (have_incumbent) {
      double frontier = open.empty() ? kInf : open.top().bound;
      for (const auto& n : plunge_stack) frontier = std::min(frontier, n.bound);
      best_open_bound = std::min(frontier, incumbent_obj);
      if (rel_gap(incumbent_obj, best_open_bound) <= opts.gap_tol) break;
    }
    if (result.stats.nodes >= opts.node_limit) {
      stopped = true;
      stop_status = SolveStatus::kNodeLimit;
      break;
    }
    if (opts.time_limit_s > 0 && elapsed_s() > opts.time_limit_s) {
      stopped = true;
      stop_status = SolveStatus::kGapLimit;
      break;
    }

    TreeNode node;
    if (!plunge_stack.empty()) {
      node = plunge_stack.back();
      plunge_stack.pop_back();
    } else {
      node = open.top();
      open.pop();
    }
    if (have_incumbent &&
        node.bound >= incumbent_obj - 1e-9 * std::max(1.0, std::fabs(incumbent_obj)))
      continue;

    result.stats.nodes++;
    apply_node_bounds(node);

    // Cut/no-good loop at this node.
    LpSolution sol;
    bool pruned = false;
    int cut_round = 0;
    while (true) {
      sol = engine.solve();
      result.stats.lp_iterations += sol.iterations;
      if (sol.status == LpStatus::kInfeasible) {
        pruned = true;
        break;
      }
      if (sol.status != LpStatus::kOptimal) {
        throw std::runtime_error("LP " +
                                 std::string(sol.status == LpStatus::kUnbounded
                                                 ? "unbounded"
                                                 : "numerical failure") +
                                 " at node " + std::to_string(node.id));
      }
      const double node_bound = sol.objective + system.objective_constant;
      if (have_incumbent &&
          node_bound >= incumbent_obj - 1e-9 * std::max(1.0, std::fabs(incumbent_obj))) {
        pruned = true;
        break;
      }

      // Separate violated cones.
      if (cut_round < opts.cut_rounds) {
        int added = 0;
        for (const auto& cone : system.cones) {
          const double fh = sol.x[cone.flow];
          const double gh = sol.x[cone.gamma];
          if (cone.rotated) {
            const double zh = sol.x[cone.build];
            if (zh < 1.0 - kIntTol) continue;  // separate only at integral z
          }
          const double need = cone.w * fh * fh;
          if (gh < need - opts.cut_tol * std::max(1.0, need)) {
            LinearRow cut = oa_cut(cone, fh);
            engine.add_row({cut.coeffs, cut.sense, cut.rhs});
            result.stats.cuts++;
            ++added;
          }
        }
        if (added > 0) {
          ++cut_round;
          continue;
        }
      }

      // Integrality.
      int branch_var = -1;
      double branch_frac = kIntTol;
      bool among_build = false;
      for (int j : binaries) {
        const double v = sol.x[j];
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac <= kIntTol) continue;
        const bool is_build = system.variables[j].kind == VarKind::kBuild;
        if (is_build && !among_build) {
          among_build = true;
          branch_var = j;
          branch_frac = frac;
          continue;
        }
        if (is_build != among_build) continue;
        if (frac > branch_frac + 1e-12) {
          branch_var = j;
          branch_frac = frac;
        } else if (frac > branch_frac - 1e-12 && branch_var >= 0) {
          auto cost = [&](int v2) {
            auto it = system.objective.find(v2);
            return it == system.objective.end() ? 0.0 : it->second;
          };
          if (cost(j) > cost(branch_var) + 1e-12) {
            branch_var = j;
            branch_frac = frac;
          } else if (cost(j) == cost(branch_var)) {
            const auto& a = system.variables[j];
            const auto& b = system.variables[branch_var];
            if (std::tie(a.owner, a.scenario) < std::tie(b.owner, b.scenario)) {
              // keep deterministic order: prefer smaller id
              branch_var = j;
            }
          }
        }
      }

      if (branch_var >= 0) {
        const double v = sol.x[branch_var];
        const double preferred = v >= 0.5 ? 1.0 : 0.0;
        TreeNode pref{node_bound, next_id++, node.depth + 1,
                      std::make_shared<Fixing>(Fixing{node.fixings, branch_var, preferred})};
        TreeNode other{node_bound, next_id++, node.depth + 1,
                       std::make_shared<Fixing>(
                           Fixing{node.fixings, branch_var, 1.0 - preferred})};
        if (have_incumbent) {
          // Depth-first plunge once an incumbent exists.
          open.push(other);
          plunge_stack.push_back(pref);
        } else {
          open.push(other);
          open.push(pref);
        }
        pruned = true;  // node handed over to children
        break;
      }

      // Integral point: verify physics.
      ExpansionPlan plan = plan_from_point(system, sol.x);
      result.stats.verify_calls++;
      VerifyOutcome vo = incumbent_verify(system, sol.x, plan);
      if (vo.verified) {
        const double obj = objective_of(plan);
        if (!have_incumbent ||
            obj < incumbent_obj - 1e-9 * std::max(1.0, std::fabs(incumbent_obj))) {
          incumbent_obj = obj;
          incumbent_plan = std::move(plan);
          incumbent_states = std::move(vo.states);
          have_incumbent = true;
        }
        pruned = true;  // LP optimum of this node is attained and verified
        break;
      }
      // Exclude this assignment and resolve.
      LinearProgram::Row nogood;
      double ones = 0;
      for (int j : binaries) {
        if (sol.x[j] > 0.5) {
          nogood.coeffs.push_back({j, -1.0});
          ones += 1.0;
        } else {
          nogood.coeffs.push_back({j, 1.0});
        }
      }
      nogood.sense = 'G';
      nogood.rhs = 1.0 - ones;
      engine.add_row(nogood);
      result.stats.no_goods++;
      if (result.stats.nodes + result.stats.no_goods > opts.node_limit * 4) {
        stopped = true;
        stop_status = SolveStatus::kNodeLimit;
        open.push(node);  // keep its bound in the frontier accounting
        break;
      }
    }
    (void)pruned;
    if (stopped) break;
  }

  result.stats.wall_ms = elapsed_s() * 1000.0;
  result.stats.lp_iterations = engine.total_iterations();

  double final_bound;
  if (stopped) {
    double frontier = open.empty() ? kInf : open.top().bound;
    for (const auto& n : plunge_stack) frontier = std::min(frontier, n.bound);
    final_bound = std::min(have_incumbent ? incumbent_obj : kInf, frontier);
    if (final_bound == kInf || final_bound == -kInf) final_bound = 0.0;
  } else {
    final_bound = have_incumbent ? incumbent_obj : 0.0;
  }

  if (have_incumbent) {
    result.plan = incumbent_plan;
    result.objective = incumbent_obj;
    result.bound = stopped ? final_bound : incumbent_obj;
    result.gap = rel_gap(result.objective, result.bound);
    result.states = incumbent_states;
    result.status = stopped ? stop_status : SolveStatus::kOptimal;
    if (!stopped) result.gap = 0.0;
  } else {
    result.status = stopped ? stop_status : SolveStatus::kInfeasible;
    result.objective = 0.0;
    result.bound = final_bound;
    result.gap = kInf;
  }
  return result;
}

}  // namespace gasplan
