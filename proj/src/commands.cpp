// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <thread>

#include "gasplan/artifacts.hpp"
#include "gasplan/instance_io.hpp"
#include "gasplan/physics.hpp"
#include "gasplan/rng.hpp"

namespace gasplan {

namespace {

constexpr const char* kSlackNote =
    "sample feasibility allows full recourse: slack pressures are chosen per "
    "sample (seeded from the relaxation, common shift applied) rather than "
    "pinned to the planning solution";

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::vector<DemandProfile> resolve_profiles(const RunConfig& config,
                                            const Network& net) {
  const bool have_file = !config.profile_path.empty();
  const bool have_gen = !config.deltas.empty();
  if (have_file == have_gen)
    throw ValidationError(
        "exactly one profile source required: --profile or --delta/--epsilon");
  if (have_file) return load_profiles_file(config.profile_path);
  if (config.epsilon < 0.0 || config.epsilon >= 1.0)
    throw ValidationError("--epsilon must be in [0, 1) when --delta is used");
  std::vector<DemandProfile> out;
  for (std::size_t k = 0; k < config.deltas.size(); ++k)
    out.push_back(scale_profile(net, config.deltas[k], config.epsilon,
                                "k" + std::to_string(k)));
  return out;
}

struct SolveSetup {
  std::shared_ptr<const Network> net;
  std::vector<DemandProfile> profiles;
  ConstraintSystem system;
};

CompressorPolicy parse_policy(const std::string& policy) {
  if (policy == "monotone") return CompressorPolicy::kMonotone;
  if (policy == "general") return CompressorPolicy::kGeneral;
  throw ValidationError("--policy must be monotone or general");
}

SolveSetup prepare_system(const RunConfig& config) {
  SolveSetup s;
  s.net = std::make_shared<const Network>(load_instance_file(config.instance_path));
  s.profiles = resolve_profiles(config, *s.net);
  const CompressorPolicy policy = parse_policy(config.policy);
  if (config.mode == "deterministic") {
    if (s.profiles.size() != 1)
      throw ValidationError("deterministic mode requires exactly one profile");
    s.system = build_deterministic_model(s.net, center_scenario(s.profiles[0]), policy);
  } else if (config.mode == "robust") {
    ScenarioSet set{s.profiles};
    if (config.use_extremal) {
      s.system = build_robust_model(s.net, set, policy, true);
    } else {
      std::vector<Scenario> scenarios;
      for (const auto& p : s.profiles) {
        auto drawn = sample(p, config.samples, split_seed(config.seed, "model-scenarios"));
        scenarios.insert(scenarios.end(), drawn.begin(), drawn.end());
      }
      s.system = build_robust_model(s.net, set, policy, false, &scenarios);
    }
  } else {
    throw ValidationError("--mode must be robust or deterministic");
  }
  return s;
}

int exit_for_status(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return kExitOk;
    case SolveStatus::kInfeasible: return kExitInfeasible;
    default: return kExitLimit;
  }
}

// Deterministic parallel map: results land by index regardless of scheduling.
std::vector<char> parallel_feasibility(const Network& net, const ExpansionPlan& plan,
                                       const std::vector<Scenario>& scenarios,
                                       CompressorPolicy policy, int threads) {
  std::vector<char> ok(scenarios.size(), 0);
  int n_workers = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min<int>(n_workers, 8));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= scenarios.size()) return;
      ok[i] = feasibility(net, plan, scenarios[i], policy) ? 1 : 0;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return ok;
}

void ensure_out_dir(const RunConfig& config) {
  std::filesystem::create_directories(config.out_dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  SolveSetup setup;
  try {
    setup = prepare_system(config);
    ensure_out_dir(config);
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  SolveResult result = solve(setup.system, config.solver);
  write_solve_report(join_path(config.out_dir, "solve_report.json"), result);
  if (!config.dump_model_path.empty()) {
    std::ofstream dump(config.dump_model_path);
    dump_model(setup.system, dump);
    std::ofstream mdump(config.dump_model_path + ".json");
    mdump << model_to_json(setup.system);
  }

  if (result.status != SolveStatus::kOptimal) {
    out << "status: " << solve_status_name(result.status) << "\n";
    return exit_for_status(result.status);
  }

  // Expansion plans are only published once the nonlinear physics accepts
  // them on every scenario of the solved model.
  const CompressorPolicy policy = parse_policy(config.policy);
  for (const auto& info : setup.system.scenarios) {
    Scenario sc{info.scenario_id, info.profile_id, info.demands};
    if (!feasibility(*setup.net, result.plan, sc, policy)) {
      err << "internal error: optimal plan failed physics validation on "
          << info.scenario_id << "\n";
      return kExitInternal;
    }
  }
  write_plan_json(join_path(config.out_dir, "plan.json"), setup.net->name(),
                  config.mode, config.policy, result, kSlackNote);

  out << "status: optimal\n";
  out << "objective: " << fmt(result.objective) << "\n";
  out << "built:";
  for (const auto& id : result.plan.built) out << " " << id;
  out << "\n";
  out << "bound: " << fmt(result.bound) << "  gap: " << fmt(result.gap)
      << "  nodes: " << result.stats.nodes << "  cuts: " << result.stats.cuts
      << "  wall_ms: " << fmt(result.stats.wall_ms, "%.1f") << "\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.epsilons.empty()) {
    err << "config error: --epsilons required for sweep\n";
    return kExitConfig;
  }
  for (std::size_t i = 1; i < config.epsilons.size(); ++i)
    if (config.epsilons[i] < config.epsilons[i - 1]) {
      err << "config error: --epsilons must be sorted ascending\n";
      return kExitConfig;
    }
  if (config.deltas.empty()) {
    err << "config error: sweep requires --delta generation\n";
    return kExitConfig;
  }
  try {
    ensure_out_dir(config);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  struct Row {
    double epsilon, objective, gap, wall_ms;
    std::int64_t nodes;
    std::string status;
  };
  std::vector<Row> rows;
  for (double eps : config.epsilons) {
    RunConfig sub = config;
    sub.epsilon = eps;
    sub.mode = "robust";
    Row row{eps, 0.0, 0.0, 0.0, 0, "error"};
    try {
      SolveSetup setup = prepare_system(sub);
      SolveResult res = solve(setup.system, config.solver);
      row.objective = res.objective;
      row.gap = res.gap;
      row.nodes = res.stats.nodes;
      row.wall_ms = res.stats.wall_ms;
      row.status = solve_status_name(res.status);
    } catch (const ValidationError& e) {
      err << "config error: " << e.what() << "\n";
      return kExitConfig;
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
    }
    rows.push_back(row);
  }

  std::ofstream csv(join_path(config.out_dir, "sweep.csv"), std::ios::binary);
  csv << "epsilon,objective,gap,nodes,wall_ms,status\n";
  for (const auto& r : rows) {
    csv << fmt(r.epsilon) << "," << (r.status == "optimal" ? fmt(r.objective) : "")
        << "," << fmt(r.gap) << "," << r.nodes << "," << fmt(r.wall_ms, "%.3f")
        << "," << r.status << "\n";
  }
  csv.close();

  bool monotone = true;
  double prev = -kInf;
  for (const auto& r : rows) {
    if (r.status != "optimal") continue;
    out << "epsilon " << fmt(r.epsilon) << ": objective " << fmt(r.objective)
        << "\n";
    if (r.objective < prev - 1e-9 * std::max(1.0, std::fabs(prev))) monotone = false;
    prev = r.objective;
  }
  if (!monotone) {
    err << "cost monotonicity violated across the epsilon sweep\n";
    return kExitNonMonotone;
  }
  for (const auto& r : rows)
    if (r.status != "optimal" && r.status.rfind("error", 0) == 0) return kExitInternal;
  return kExitOk;
}

int cmd_mc_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (!config.seed_set) {
    err << "config error: --seed is required for mc-check\n";
    return kExitConfig;
  }
  if (config.plan_path.empty()) {
    err << "config error: --plan is required for mc-check\n";
    return kExitConfig;
  }
  std::shared_ptr<const Network> net;
  std::vector<DemandProfile> profiles;
  ExpansionPlan plan;
  try {
    net = std::make_shared<const Network>(load_instance_file(config.instance_path));
    profiles = resolve_profiles(config, *net);
    plan = load_plan_file(config.plan_path, *net);
    ensure_out_dir(config);
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const CompressorPolicy policy = parse_policy(config.policy);

  std::ofstream csv(join_path(config.out_dir, "mc_samples.csv"), std::ios::binary);
  csv << "profile_id,sample_index,feasible\n";
  std::string summary_json = "{\n";
  summary_json += "  \"samples_per_profile\": " + std::to_string(config.samples) + ",\n";
  summary_json += "  \"plan\": \"" + config.plan_path + "\",\n";
  summary_json += "  \"probabilities\": {\n";
  double total_ok = 0, total_n = 0;
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    auto scenarios = sample(profiles[k], config.samples,
                            split_seed(config.seed, "mc-check"));
    auto ok = parallel_feasibility(*net, plan, scenarios, policy, config.threads);
    int n_ok = 0;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      csv << profiles[k].profile_id << "," << i << "," << int(ok[i]) << "\n";
      n_ok += ok[i];
    }
    const double p = double(n_ok) / double(scenarios.size());
    total_ok += n_ok;
    total_n += double(scenarios.size());
    out << "profile " << profiles[k].profile_id << ": " << n_ok << "/"
        << scenarios.size() << " feasible (p=" << fmt(p, "%.6g") << ")\n";
    summary_json += "    \"" + profiles[k].profile_id + "\": " + fmt(p, "%.10g");
    summary_json += k + 1 < profiles.size() ? ",\n" : "\n";
  }
  summary_json += "  },\n";
  summary_json += "  \"overall\": " + fmt(total_n > 0 ? total_ok / total_n : 0.0, "%.10g") + ",\n";
  summary_json += std::string("  \"slack_pressure_policy\": \"") + kSlackNote + "\"\n";
  summary_json += "}\n";
  std::ofstream summary(join_path(config.out_dir, "mc_summary.json"), std::ios::binary);
  summary << summary_json;
  return kExitOk;
}

int cmd_compare_policy(const RunConfig& config, std::ostream& out, std::ostream& err) {
  RunConfig mono = config;
  mono.policy = "monotone";
  mono.mode = "robust";
  RunConfig gen = mono;
  gen.policy = "general";

  SolveResult rm, rg;
  try {
    SolveSetup sm = prepare_system(mono);
    rm = solve(sm.system, config.solver);
    SolveSetup sg = prepare_system(gen);
    rg = solve(sg.system, config.solver);
    ensure_out_dir(config);
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (rm.status != SolveStatus::kOptimal || rg.status != SolveStatus::kOptimal) {
    err << "policy comparison requires both solves optimal (monotone: "
        << solve_status_name(rm.status) << ", general: " << solve_status_name(rg.status)
        << ")\n";
    return rm.status == SolveStatus::kInfeasible || rg.status == SolveStatus::kInfeasible
               ? kExitInfeasible
               : kExitLimit;
  }

  const bool plans_match = rm.plan.built == rg.plan.built;
  const double cost_delta = rm.objective - rg.objective;  // monotone - general
  double max_dev = 0.0;
  for (const auto& sm : rm.states)
    for (const auto& sg : rg.states) {
      if (sm.scenario_id != sg.scenario_id) continue;
      for (const auto& [id, pi] : sm.pi) {
        auto it = sg.pi.find(id);
        if (it != sg.pi.end()) max_dev = std::max(max_dev, std::fabs(pi - it->second));
      }
    }

  std::ofstream report(join_path(config.out_dir, "compare_report.json"), std::ios::binary);
  report << "{\n"
         << "  \"plans_match\": " << (plans_match ? "true" : "false") << ",\n"
         << "  \"cost_monotone\": " << fmt(rm.objective) << ",\n"
         << "  \"cost_general\": " << fmt(rg.objective) << ",\n"
         << "  \"cost_delta\": " << fmt(cost_delta) << ",\n"
         << "  \"max_pressure_sq_deviation\": " << fmt(max_dev) << ",\n"
         << "  \"built_monotone\": [";
  for (std::size_t i = 0; i < rm.plan.built.size(); ++i)
    report << (i ? ", " : "") << '"' << rm.plan.built[i] << '"';
  report << "],\n  \"built_general\": [";
  for (std::size_t i = 0; i < rg.plan.built.size(); ++i)
    report << (i ? ", " : "") << '"' << rg.plan.built[i] << '"';
  report << "]\n}\n";

  out << "plans_match: " << (plans_match ? "yes" : "no") << "\n";
  out << "cost delta (monotone - general): " << fmt(cost_delta) << "\n";
  out << "max squared-pressure deviation: " << fmt(max_dev) << "\n";
  return kExitOk;
}

}  // namespace gasplan
