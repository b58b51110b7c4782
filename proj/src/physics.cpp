// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// Steady-state gas flow on the built subgraph. Pipe flow follows the
// squared-pressure drop law pi_i - pi_j = w f |f|; compressors are
// zero-resistance arcs whose flow is an independent unknown and whose
// endpoints are linked by pi_j = pi_i + eta (forward) or pi_j = pi_i
// (reverse/passive). Unknowns are the squared pressures at non-anchored
// nodes plus the compressor flows; the system is square per connected
// component that contains an anchored node.
#include "gasplan/physics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gasplan {

namespace {

constexpr double kNewtonTol = 1e-12;  // scaled residual target
constexpr double kBoundTol = 1e-6;    // relative bound slack
constexpr double kRegDpi = 1e-12;     // derivative regularization (Pa^2)

double pipe_flow(double dpi, double w) {
  const double mag = std::sqrt(std::fabs(dpi) / w);
  return dpi >= 0 ? mag : -mag;
}

double pipe_flow_derivative(double dpi, double w) {
  return 1.0 / (2.0 * std::sqrt(w * std::max(std::fabs(dpi), kRegDpi)));
}

// Dense LU with partial pivoting; returns false on singularity.
bool lu_solve(std::vector<double> a, std::vector<double>& b, int n) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(a[static_cast<std::size_t>(k) * n + k]);
    for (int r = k + 1; r < n; ++r) {
      double v = std::fabs(a[static_cast<std::size_t>(r) * n + k]);
      if (v > best) { best = v; piv = r; }
    }
    if (best < 1e-14) return false;
    if (piv != k) {
      for (int c = 0; c < n; ++c)
        std::swap(a[static_cast<std::size_t>(piv) * n + c],
                  a[static_cast<std::size_t>(k) * n + c]);
      std::swap(b[piv], b[k]);
    }
    const double inv = 1.0 / a[static_cast<std::size_t>(k) * n + k];
    for (int r = k + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r) * n + k] * inv;
      if (f == 0.0) continue;
      a[static_cast<std::size_t>(r) * n + k] = 0.0;
      for (int c = k + 1; c < n; ++c)
        a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(k) * n + c];
      b[r] -= f * b[k];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    double s = b[k];
    for (int c = k + 1; c < n; ++c) s -= a[static_cast<std::size_t>(k) * n + c] * b[c];
    b[k] = s / a[static_cast<std::size_t>(k) * n + k];
  }
  return true;
}

struct BuiltGraph {
  std::vector<int> pipes;      // indices into net.pipes()
  std::vector<int> comps;      // indices into net.compressors()
  std::vector<int> component;  // per node, over built arcs
  int num_components = 0;
};

BuiltGraph build_graph(const Network& net, const ExpansionPlan& plan) {
  BuiltGraph g;
  std::set<std::string> built(plan.built.begin(), plan.built.end());
  for (int i = 0; i < static_cast<int>(net.pipes().size()); ++i) {
    const auto& p = net.pipes()[i];
    if (p.status == ComponentStatus::kExisting || built.count(p.id)) g.pipes.push_back(i);
  }
  for (int i = 0; i < static_cast<int>(net.compressors().size()); ++i) {
    const auto& c = net.compressors()[i];
    if (c.status == ComponentStatus::kExisting || built.count(c.id)) g.comps.push_back(i);
  }
  const int n = static_cast<int>(net.nodes().size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i : g.pipes)
    parent[find(net.node_index(net.pipes()[i].from))] =
        find(net.node_index(net.pipes()[i].to));
  for (int i : g.comps)
    parent[find(net.node_index(net.compressors()[i].from))] =
        find(net.node_index(net.compressors()[i].to));
  g.component.assign(n, -1);
  std::map<int, int> remap;
  for (int i = 0; i < n; ++i) {
    auto [it, fresh] = remap.emplace(find(i), g.num_components);
    if (fresh) ++g.num_components;
    g.component[i] = it->second;
  }
  return g;
}

// Mutable solver state; the problem data is copied in so demand homotopy can
// rescale it locally.
struct NewtonWork {
  const Network* net;
  ExpansionPlan plan;
  std::map<std::string, double> demand;
  std::map<std::string, double> fixed_supply;
  std::map<std::string, double> slack_pi;
  BuiltGraph graph;

  std::vector<int> unknown_of_node;  // -1 if anchored or out of scope
  std::vector<int> solved_nodes;
  std::vector<int> comp_unknown;     // per entry of graph.comps
  std::vector<bool> node_in_scope;
  int num_unknowns = 0;

  std::vector<double> pi;         // per node
  std::vector<double> comp_flow;  // per entry of graph.comps
  std::vector<double> eta;        // per entry of graph.comps
  std::vector<int> dir;           // per entry of graph.comps
  double flow_scale = 1.0;
  double pi_scale = 1.0;
};

void residuals(const NewtonWork& w, std::vector<double>& r) {
  const Network& net = *w.net;
  r.assign(w.num_unknowns, 0.0);
  for (int k = 0; k < static_cast<int>(w.solved_nodes.size()); ++k) {
    const Node& n = net.nodes()[w.solved_nodes[k]];
    double acc = 0.0;
    auto itd = w.demand.find(n.id);
    if (itd != w.demand.end()) acc += itd->second;
    auto its = w.fixed_supply.find(n.id);
    if (its != w.fixed_supply.end()) acc -= its->second;
    r[k] = acc / w.flow_scale;
  }
  auto node_term = [&](const std::string& id, double v) {
    int u = w.unknown_of_node[net.node_index(id)];
    if (u >= 0) r[u] += v / w.flow_scale;
  };
  for (int idx : w.graph.pipes) {
    const Pipe& p = net.pipes()[idx];
    if (!w.node_in_scope[net.node_index(p.from)]) continue;
    const int i = net.node_index(p.from), j = net.node_index(p.to);
    const double f = pipe_flow(w.pi[i] - w.pi[j], net.pipe_resistance(idx));
    node_term(p.from, f);
    node_term(p.to, -f);
  }
  for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k) {
    const int u = w.comp_unknown[k];
    if (u < 0) continue;
    const Compressor& c = net.compressors()[w.graph.comps[k]];
    node_term(c.from, w.comp_flow[k]);
    node_term(c.to, -w.comp_flow[k]);
    const int i = net.node_index(c.from), j = net.node_index(c.to);
    const double boost = w.dir[k] == 1 ? w.eta[k] : 0.0;
    r[u] = (w.pi[j] - w.pi[i] - boost) / w.pi_scale;
  }
}

void jacobian(const NewtonWork& w, std::vector<double>& jac) {
  const Network& net = *w.net;
  const int n = w.num_unknowns;
  jac.assign(static_cast<std::size_t>(n) * n, 0.0);
  auto add = [&](int row, int col, double v) {
    if (row >= 0 && col >= 0) jac[static_cast<std::size_t>(row) * n + col] += v;
  };
  for (int idx : w.graph.pipes) {
    const Pipe& p = net.pipes()[idx];
    const int i = net.node_index(p.from), j = net.node_index(p.to);
    if (!w.node_in_scope[i]) continue;
    const double d =
        pipe_flow_derivative(w.pi[i] - w.pi[j], net.pipe_resistance(idx)) / w.flow_scale;
    const int ui = w.unknown_of_node[i], uj = w.unknown_of_node[j];
    add(ui, ui, d);
    add(ui, uj, -d);
    add(uj, ui, -d);
    add(uj, uj, d);
  }
  for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k) {
    const int u = w.comp_unknown[k];
    if (u < 0) continue;
    const Compressor& c = net.compressors()[w.graph.comps[k]];
    const int ui = w.unknown_of_node[net.node_index(c.from)];
    const int uj = w.unknown_of_node[net.node_index(c.to)];
    add(ui, u, 1.0 / w.flow_scale);
    add(uj, u, -1.0 / w.flow_scale);
    add(u, uj, 1.0 / w.pi_scale);
    add(u, ui, -1.0 / w.pi_scale);
  }
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

bool newton_solve(NewtonWork& w, std::string& reason) {
  const int n = w.num_unknowns;
  if (n == 0) return true;
  std::vector<double> r, jac, step;
  residuals(w, r);
  double f0 = norm2(r);
  for (int iter = 0; iter < 200; ++iter) {
    double rmax = 0.0;
    for (double v : r) rmax = std::max(rmax, std::fabs(v));
    if (rmax <= kNewtonTol) return true;
    jacobian(w, jac);
    step = r;
    if (!lu_solve(jac, step, n)) {
      reason = "singular Jacobian in steady-state solve";
      return false;
    }
    double alpha = 1.0;
    std::vector<double> pi_save = w.pi;
    std::vector<double> cf_save = w.comp_flow;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (int k = 0; k < static_cast<int>(w.solved_nodes.size()); ++k)
        w.pi[w.solved_nodes[k]] = pi_save[w.solved_nodes[k]] - alpha * step[k];
      for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k)
        if (w.comp_unknown[k] >= 0)
          w.comp_flow[k] = cf_save[k] - alpha * step[w.comp_unknown[k]];
      residuals(w, r);
      const double f1 = norm2(r);
      if (f1 <= (1.0 - 1e-4 * alpha) * f0 || f1 <= kNewtonTol * kNewtonTol) {
        f0 = f1;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      w.pi = pi_save;
      w.comp_flow = cf_save;
      residuals(w, r);
      double rmax2 = 0.0;
      for (double v : r) rmax2 = std::max(rmax2, std::fabs(v));
      if (rmax2 <= 1e-9) return true;  // flat spot within checking tolerance
      reason = "line search stalled in steady-state solve";
      return false;
    }
  }
  double rmax = 0.0;
  for (double v : r) rmax = std::max(rmax, std::fabs(v));
  if (rmax <= 1e-9) return true;
  reason = "iteration limit in steady-state solve";
  return false;
}

bool prepare(const SteadyStateProblem& prob, NewtonWork& w, std::string& reason) {
  const Network& net = *prob.net;
  w.net = prob.net;
  w.plan = prob.plan;
  w.demand = prob.scenario.demands;
  w.fixed_supply = prob.fixed_supply;
  w.slack_pi = prob.slack_pressure_sq;
  w.graph = build_graph(net, prob.plan);

  const int n = static_cast<int>(net.nodes().size());
  std::vector<bool> comp_anchored(w.graph.num_components, false);
  for (const auto& [id, value] : w.slack_pi) {
    int idx = net.node_index(id);
    if (idx >= 0) comp_anchored[w.graph.component[idx]] = true;
  }
  w.node_in_scope.assign(n, false);
  w.unknown_of_node.assign(n, -1);
  w.solved_nodes.clear();
  w.pi.assign(n, 0.0);
  double max_d = 1.0, max_pi = 1.0;
  for (const auto& [id, d] : w.demand) max_d = std::max(max_d, std::fabs(d));
  for (const auto& [id, s] : w.fixed_supply) max_d = std::max(max_d, std::fabs(s));
  for (int i = 0; i < n; ++i) {
    const Node& node = net.nodes()[i];
    max_pi = std::max(max_pi, node.pressure_sq_max);
    const bool anchored = comp_anchored[w.graph.component[i]];
    if (anchored) {
      w.node_in_scope[i] = true;
      continue;
    }
    auto itd = w.demand.find(node.id);
    const double d = itd == w.demand.end() ? 0.0 : itd->second;
    auto its = w.fixed_supply.find(node.id);
    const double fs = its == w.fixed_supply.end() ? 0.0 : its->second;
    if (std::fabs(d) > 1e-9 || std::fabs(fs) > 1e-9) {
      reason = "node " + node.id + " is not connected to an anchored supply";
      return false;
    }
    w.pi[i] = 0.5 * (node.pressure_sq_min + node.pressure_sq_max);
  }
  w.flow_scale = max_d;
  w.pi_scale = max_pi;

  for (int i = 0; i < n; ++i) {
    if (!w.node_in_scope[i]) continue;
    const Node& node = net.nodes()[i];
    auto slack_it = w.slack_pi.find(node.id);
    if (slack_it != w.slack_pi.end()) {
      w.pi[i] = slack_it->second;
      continue;
    }
    w.unknown_of_node[i] = static_cast<int>(w.solved_nodes.size());
    w.solved_nodes.push_back(i);
    auto init_it = prob.initial_pi.find(node.id);
    w.pi[i] = init_it != prob.initial_pi.end()
                  ? init_it->second
                  : 0.5 * (node.pressure_sq_min + node.pressure_sq_max);
  }
  const int nb = static_cast<int>(w.solved_nodes.size());
  w.comp_unknown.assign(w.graph.comps.size(), -1);
  w.comp_flow.assign(w.graph.comps.size(), 0.0);
  w.eta.assign(w.graph.comps.size(), 0.0);
  w.dir.assign(w.graph.comps.size(), 1);
  int next = nb;
  for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k) {
    const Compressor& c = net.compressors()[w.graph.comps[k]];
    if (!w.node_in_scope[net.node_index(c.from)]) continue;
    w.comp_unknown[k] = next++;
    auto itd = prob.compressor_direction.find(c.id);
    w.dir[k] = itd == prob.compressor_direction.end() ? 1 : itd->second;
    auto ite = prob.boost.find(c.id);
    w.eta[k] = ite == prob.boost.end() ? 0.0 : std::max(0.0, ite->second);
  }
  w.num_unknowns = next;
  return true;
}

NetworkState extract_state(const NewtonWork& w, const std::string& scenario_id) {
  const Network& net = *w.net;
  NetworkState st;
  st.scenario_id = scenario_id;
  for (int i = 0; i < static_cast<int>(net.nodes().size()); ++i)
    st.pi[net.nodes()[i].id] = w.pi[i];
  std::map<std::string, double> injection;  // net outflow per node
  for (int idx : w.graph.pipes) {
    const Pipe& p = net.pipes()[idx];
    const int i = net.node_index(p.from), j = net.node_index(p.to);
    const double f = pipe_flow(w.pi[i] - w.pi[j], net.pipe_resistance(idx));
    st.flow[p.id] = f;
    st.direction[p.id] = f >= 0 ? 1 : 0;
    injection[p.from] += f;
    injection[p.to] -= f;
  }
  for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k) {
    const Compressor& c = net.compressors()[w.graph.comps[k]];
    st.flow[c.id] = w.comp_flow[k];
    st.direction[c.id] = w.dir[k];
    st.boost[c.id] = w.dir[k] == 1 ? w.eta[k] : 0.0;
    injection[c.from] += w.comp_flow[k];
    injection[c.to] -= w.comp_flow[k];
  }
  for (const auto& n : net.nodes()) {
    if (!n.is_receipt) continue;
    double s = 0.0;
    auto itd = w.demand.find(n.id);
    if (itd != w.demand.end()) s += itd->second;
    auto it = injection.find(n.id);
    if (it != injection.end()) s += it->second;
    st.supply[n.id] = s;
  }
  return st;
}

// Projected Gauss-Newton on forward-compressor boosts against pressure and
// ratio violations; a common-shift column absorbs uniform offsets when the
// caller allows shifting.
bool adjust_boosts_loop(NewtonWork& w, bool with_shift, std::string& reason) {
  const Network& net = *w.net;
  std::vector<int> adjustable;
  std::vector<double> eta_hi;
  for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k) {
    if (w.comp_unknown[k] < 0 || w.dir[k] != 1) continue;
    const Compressor& c = net.compressors()[w.graph.comps[k]];
    adjustable.push_back(k);
    eta_hi.push_back(std::max(
        0.0, net.node(c.to).pressure_sq_max - net.node(c.from).pressure_sq_min));
  }
  const int nv = static_cast<int>(adjustable.size()) + (with_shift ? 1 : 0);
  if (static_cast<int>(adjustable.size()) == 0) return false;
  const int n = w.num_unknowns;

  for (int outer = 0; outer < 25; ++outer) {
    std::vector<double> jac;
    jacobian(w, jac);
    std::vector<std::vector<double>> dpi(adjustable.size());
    for (std::size_t a = 0; a < adjustable.size(); ++a) {
      std::vector<double> rhs(n, 0.0);
      rhs[w.comp_unknown[adjustable[a]]] = 1.0 / w.pi_scale;
      if (!lu_solve(jac, rhs, n)) {
        reason = "singular Jacobian in boost adjustment";
        return false;
      }
      dpi[a] = std::move(rhs);
    }
    // d pi(node) / d eta_a, an O(1) dimensionless sensitivity.
    auto sens = [&](int node, std::size_t a) {
      const int u = w.unknown_of_node[node];
      return u >= 0 ? dpi[a][u] : 0.0;
    };

    std::vector<double> values;               // scaled violation magnitudes
    std::vector<std::vector<double>> grads;   // per violation, size nv
    auto emit = [&](double v, std::vector<double> g) {
      values.push_back(v);
      grads.push_back(std::move(g));
    };
    for (int i = 0; i < static_cast<int>(net.nodes().size()); ++i) {
      if (!w.node_in_scope[i]) continue;
      const Node& node = net.nodes()[i];
      const double tol = 0.5 * kBoundTol * std::max(1.0, node.pressure_sq_max);
      double over = w.pi[i] - node.pressure_sq_max;
      double under = node.pressure_sq_min - w.pi[i];
      if (over > tol || under > tol) {
        std::vector<double> g(nv, 0.0);
        for (std::size_t a = 0; a < adjustable.size(); ++a) g[a] = sens(i, a);
        if (with_shift) g[nv - 1] = 1.0;
        if (over > tol) {
          emit(over / w.pi_scale, g);
        } else {
          for (auto& x : g) x = -x;
          emit(under / w.pi_scale, std::move(g));
        }
      }
    }
    for (int k = 0; k < static_cast<int>(w.graph.comps.size()); ++k) {
      if (w.comp_unknown[k] < 0 || w.dir[k] != 1) continue;
      const Compressor& c = net.compressors()[w.graph.comps[k]];
      const int i = net.node_index(c.from), j = net.node_index(c.to);
      const double tol = 0.5 * kBoundTol * std::max(1.0, net.node(c.to).pressure_sq_max);
      const double over = w.pi[j] - c.ratio_sq_max * w.pi[i];
      const double under = c.ratio_sq_min * w.pi[i] - w.pi[j];
      const bool active = std::fabs(w.comp_flow[k]) >
                              kBoundTol * std::max(1.0, c.flow_max) ||
                          w.eta[k] > tol;
      if (!active) continue;
      if (over > tol) {
        std::vector<double> g(nv, 0.0);
        for (std::size_t a = 0; a < adjustable.size(); ++a)
          g[a] = sens(j, a) - c.ratio_sq_max * sens(i, a);
        if (with_shift) g[nv - 1] = 1.0 - c.ratio_sq_max;
        emit(over / w.pi_scale, std::move(g));
      }
      if (under > tol) {
        std::vector<double> g(nv, 0.0);
        for (std::size_t a = 0; a < adjustable.size(); ++a)
          g[a] = c.ratio_sq_min * sens(i, a) - sens(j, a);
        if (with_shift) g[nv - 1] = c.ratio_sq_min - 1.0;
        emit(under / w.pi_scale, std::move(g));
      }
    }
    if (values.empty()) return true;

    std::vector<double> ata(static_cast<std::size_t>(nv) * nv, 0.0), atb(nv, 0.0);
    for (std::size_t v = 0; v < values.size(); ++v) {
      for (int a = 0; a < nv; ++a) {
        atb[a] += grads[v][a] * values[v];
        for (int b2 = 0; b2 < nv; ++b2)
          ata[static_cast<std::size_t>(a) * nv + b2] += grads[v][a] * grads[v][b2];
      }
    }
    for (int a = 0; a < nv; ++a) ata[static_cast<std::size_t>(a) * nv + a] += 1e-9;
    std::vector<double> step = atb;
    if (!lu_solve(ata, step, nv)) return false;

    bool moved = false;
    for (std::size_t a = 0; a < adjustable.size(); ++a) {
      const int k = adjustable[a];
      const double target =
          std::clamp(w.eta[k] - step[a] * w.pi_scale, 0.0, eta_hi[a]);
      if (std::fabs(target - w.eta[k]) > 1e-7 * w.pi_scale) moved = true;
      w.eta[k] = target;
    }
    if (!moved) return false;
    if (!newton_solve(w, reason)) return false;
  }
  return false;
}

PhysicsResult finish_state(const NewtonWork& w, const std::string& scenario_id,
                           bool allow_shift) {
  NetworkState st = extract_state(w, scenario_id);
  if (allow_shift) {
    auto [lo, hi] = pressure_shift_interval(*w.net, st);
    if (lo <= hi) apply_pressure_shift(st, std::clamp(0.0, lo, hi));
  }
  std::string err = check_state(*w.net, st);
  PhysicsResult res;
  res.state = std::move(st);
  res.status = err.empty() ? PhysicsStatus::kVerified : PhysicsStatus::kInfeasible;
  res.reason = std::move(err);
  return res;
}

}  // namespace

std::pair<double, double> pressure_shift_interval(const Network& net,
                                                  const NetworkState& state) {
  double lo = -kInf, hi = kInf;
  for (const auto& [id, pi] : state.pi) {
    const Node& n = net.node(id);
    const double tol = kBoundTol * std::max(1.0, n.pressure_sq_max);
    lo = std::max(lo, n.pressure_sq_min - tol - pi);
    hi = std::min(hi, n.pressure_sq_max + tol - pi);
  }
  for (const auto& c : net.compressors()) {
    auto itb = state.boost.find(c.id);
    if (itb == state.boost.end()) continue;  // not in the built subgraph
    auto itd = state.direction.find(c.id);
    const int dir = itd == state.direction.end() ? 1 : itd->second;
    if (dir == 0) continue;  // passive: equal pressures, shift-invariant
    const double ptol = kBoundTol * std::max(1.0, net.node(c.to).pressure_sq_max);
    auto itf = state.flow.find(c.id);
    const double f = itf == state.flow.end() ? 0.0 : itf->second;
    const bool active =
        std::fabs(f) > kBoundTol * std::max(1.0, c.flow_max) || itb->second > ptol;
    if (!active) continue;  // idle machine imposes no ratio window
    const double pi_i = state.pi.at(c.from);
    const double pi_j = state.pi.at(c.to);
    if (c.ratio_sq_max > 1.0)
      lo = std::max(lo, (pi_j - c.ratio_sq_max * pi_i - ptol) / (c.ratio_sq_max - 1.0));
    else if (pi_j - pi_i > ptol)
      return {1.0, 0.0};  // unit ratio but a boost is present: no shift helps
    if (c.ratio_sq_min > 1.0)
      hi = std::min(hi, (pi_j - c.ratio_sq_min * pi_i + ptol) / (c.ratio_sq_min - 1.0));
  }
  return {lo, hi};
}

void apply_pressure_shift(NetworkState& state, double c) {
  if (c == 0.0) return;
  for (auto& [id, pi] : state.pi) pi += c;
}

std::string check_state(const Network& net, const NetworkState& state) {
  for (const auto& [id, pi] : state.pi) {
    const Node& n = net.node(id);
    const double tol = kBoundTol * std::max(1.0, n.pressure_sq_max);
    if (pi < n.pressure_sq_min - tol || pi > n.pressure_sq_max + tol)
      return "pressure bound violated at node " + id;
  }
  for (const auto& p : net.pipes()) {
    auto it = state.flow.find(p.id);
    if (it == state.flow.end()) continue;
    if (std::fabs(it->second) > p.flow_max + kBoundTol * std::max(1.0, p.flow_max))
      return "flow bound violated on pipe " + p.id;
  }
  for (const auto& c : net.compressors()) {
    auto it = state.flow.find(c.id);
    if (it == state.flow.end()) continue;
    const double f = it->second;
    const double ftol = kBoundTol * std::max(1.0, c.flow_max);
    if (std::fabs(f) > c.flow_max + ftol)
      return "flow bound violated on compressor " + c.id;
    const double pi_i = state.pi.at(c.from);
    const double pi_j = state.pi.at(c.to);
    const double ptol = kBoundTol * std::max(1.0, net.node(c.to).pressure_sq_max);
    const bool boosted = pi_j > pi_i + ptol;
    if (f < -ftol) {
      if (std::fabs(pi_j - pi_i) > ptol)
        return "reverse flow with pressure jump on compressor " + c.id;
    } else if (boosted || f > ftol) {
      if (pi_j < c.ratio_sq_min * pi_i - ptol)
        return "compression ratio below minimum on compressor " + c.id;
      if (pi_j > c.ratio_sq_max * pi_i + ptol)
        return "compression ratio above maximum on compressor " + c.id;
    }
  }
  for (const auto& n : net.nodes()) {
    auto it = state.supply.find(n.id);
    if (it == state.supply.end()) continue;
    const double tol = kBoundTol * std::max(1.0, std::fabs(it->second));
    if (it->second < n.supply_min - tol || it->second > n.supply_max + tol)
      return "supply bound violated at node " + n.id;
  }
  return {};
}

PhysicsResult steady_state_solve(const SteadyStateProblem& problem) {
  PhysicsResult out;
  NewtonWork w;
  std::string reason;
  if (!prepare(problem, w, reason)) {
    out.status = PhysicsStatus::kInfeasible;
    out.reason = reason;
    return out;
  }
  if (!newton_solve(w, reason)) {
    // Homotopy fallback: ramp the load up from a quarter of the target.
    NewtonWork wt;
    std::vector<double> warm_pi;
    std::vector<double> warm_cf;
    bool recovered = false;
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
      SteadyStateProblem scaled = problem;
      for (auto& [id, d] : scaled.scenario.demands) d *= t;
      for (auto& [id, s] : scaled.fixed_supply) s *= t;
      std::string r2;
      if (!prepare(scaled, wt, r2)) break;
      if (!warm_pi.empty()) {
        wt.pi = warm_pi;
        wt.comp_flow = warm_cf;
      }
      if (!newton_solve(wt, r2)) break;
      warm_pi = wt.pi;
      warm_cf = wt.comp_flow;
      recovered = (t == 1.0);
    }
    if (!recovered) {
      out.status = PhysicsStatus::kNoConverge;
      out.reason = reason;
      return out;
    }
    w.pi = wt.pi;
    w.comp_flow = wt.comp_flow;
  }

  out = finish_state(w, problem.scenario.scenario_id, problem.allow_pressure_shift);
  if (out.status == PhysicsStatus::kVerified || !problem.adjust_boosts) return out;

  std::string reason2;
  if (adjust_boosts_loop(w, problem.allow_pressure_shift, reason2)) {
    PhysicsResult adjusted =
        finish_state(w, problem.scenario.scenario_id, problem.allow_pressure_shift);
    return adjusted;
  }
  // Keep the better of the two attempts for diagnostics.
  PhysicsResult adjusted =
      finish_state(w, problem.scenario.scenario_id, problem.allow_pressure_shift);
  return adjusted.status == PhysicsStatus::kVerified ? adjusted : out;
}

MonotonicityReport monotonicity_check(const Network& net, const ExpansionPlan& plan,
                                      CompressorPolicy policy,
                                      const Scenario& scenario_low,
                                      const Scenario& scenario_high) {
  MonotonicityReport rep;
  SteadyStateProblem base;
  base.net = &net;
  base.plan = plan;
  for (const auto& g : net.slack_nodes()) {
    const Node& n = net.node(g);
    base.slack_pressure_sq[g] = 0.5 * (n.pressure_sq_min + n.pressure_sq_max);
  }
  // Solve the high-demand case first, letting boosts settle toward bounds;
  // the low case then runs under the identical policy (same boosts, same
  // directions, same anchors), which is what the ordering claim assumes.
  SteadyStateProblem high = base;
  high.scenario = scenario_high;
  high.adjust_boosts = policy == CompressorPolicy::kMonotone;
  PhysicsResult rh = steady_state_solve(high);
  if (rh.status == PhysicsStatus::kNoConverge) {
    rep.failure = "high-demand solve failed: " + rh.reason;
    return rep;
  }
  SteadyStateProblem low = base;
  low.scenario = scenario_low;
  low.boost = rh.state.boost;
  for (const auto& c : net.compressors()) {
    auto it = rh.state.direction.find(c.id);
    if (it != rh.state.direction.end()) low.compressor_direction[c.id] = it->second;
  }
  PhysicsResult rl = steady_state_solve(low);
  if (rl.status == PhysicsStatus::kNoConverge) {
    rep.failure = "low-demand solve failed: " + rl.reason;
    return rep;
  }
  rep.solved = true;
  rep.pi_low = rl.state.pi;
  rep.pi_high = rh.state.pi;
  for (const auto& [id, pl] : rl.state.pi) {
    const double ph = rh.state.pi.at(id);
    const double tol = 1e-9 * std::max(1.0, std::fabs(ph));
    if (pl < ph - tol) {
      rep.pressure_ordering = false;
      rep.worst_pressure_violation =
          std::max(rep.worst_pressure_violation, (ph - pl) / std::max(1.0, ph));
    }
  }
  for (const auto& c : net.compressors()) {
    auto bl = rl.state.boost.find(c.id);
    auto bh = rh.state.boost.find(c.id);
    if (bl == rl.state.boost.end() || bh == rh.state.boost.end()) continue;
    const double pi_l = rl.state.pi.at(c.from);
    const double pi_h = rh.state.pi.at(c.from);
    if (pi_l <= 0 || pi_h <= 0) continue;
    const double a_low = std::sqrt((pi_l + bl->second) / pi_l);
    const double a_high = std::sqrt((pi_h + bh->second) / pi_h);
    if (a_low > a_high + 1e-9) rep.ratio_ordering = false;
  }
  return rep;
}

}  // namespace gasplan
