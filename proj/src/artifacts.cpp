// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/artifacts.hpp"

#include <fstream>

#include "json.hpp"

namespace gasplan {

namespace {

using nlohmann::ordered_json;

ordered_json state_to_json(const NetworkState& st) {
  ordered_json js;
  js["scenario_id"] = st.scenario_id;
  js["pi"] = st.pi;
  js["flow"] = st.flow;
  js["supply"] = st.supply;
  js["boost"] = st.boost;
  js["direction"] = st.direction;
  return js;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << text;
}

}  // namespace

void write_plan_json(const std::string& path, const std::string& instance_name,
                     const std::string& mode, const std::string& policy,
                     const SolveResult& result, const std::string& note) {
  ordered_json doc;
  doc["instance"] = instance_name;
  doc["mode"] = mode;
  doc["policy"] = policy;
  doc["plan"] = {{"built", result.plan.built}, {"cost", result.plan.cost}};
  doc["objective"] = result.objective;
  doc["scenarios"] = ordered_json::array();
  for (const auto& st : result.states) doc["scenarios"].push_back(state_to_json(st));
  if (!note.empty()) doc["notes"] = note;
  write_text(path, doc.dump(2) + "\n");
}

void write_solve_report(const std::string& path, const SolveResult& result) {
  ordered_json doc;
  doc["status"] = solve_status_name(result.status);
  doc["objective"] = result.objective;
  doc["bound"] = result.bound;
  doc["gap"] = result.gap;
  doc["nodes"] = result.stats.nodes;
  doc["cuts"] = result.stats.cuts;
  doc["no_goods"] = result.stats.no_goods;
  doc["lp_iterations"] = result.stats.lp_iterations;
  doc["verify_calls"] = result.stats.verify_calls;
  doc["wall_ms"] = result.stats.wall_ms;
  write_text(path, doc.dump(2) + "\n");
}

ExpansionPlan load_plan_file(const std::string& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open plan file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("plan file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.contains("plan") || !doc["plan"].contains("built"))
    throw ValidationError(path + ": missing plan.built");
  std::vector<std::string> built;
  for (const auto& id : doc["plan"]["built"]) built.push_back(id.get<std::string>());
  return make_plan(net, std::move(built));
}

std::vector<DemandProfile> load_profiles_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open profile file: " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("profile file is not valid JSON: " + std::string(e.what()));
  }
  auto parse_one = [&path](const ordered_json& jp) {
    DemandProfile p;
    if (!jp.contains("profile_id") || !jp.contains("intervals"))
      throw ValidationError(path + ": profile requires profile_id and intervals");
    p.profile_id = jp["profile_id"].get<std::string>();
    for (const auto& [node, iv] : jp["intervals"].items()) {
      if (!iv.is_array() || iv.size() != 2)
        throw ValidationError(path + ": intervals." + node + " must be [low, high]");
      p.intervals[node] = {iv[0].get<double>(), iv[1].get<double>()};
    }
    validate_profile(p);
    return p;
  };
  std::vector<DemandProfile> out;
  if (doc.is_array()) {
    for (const auto& jp : doc) out.push_back(parse_one(jp));
  } else {
    out.push_back(parse_one(doc));
  }
  if (out.empty()) throw ValidationError(path + ": no profiles");
  return out;
}

std::string serialize_profiles(const std::vector<DemandProfile>& profiles) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : profiles) {
    ordered_json jp;
    jp["profile_id"] = p.profile_id;
    ordered_json iv = ordered_json::object();
    for (const auto& [node, bounds] : p.intervals)
      iv[node] = {bounds.first, bounds.second};
    jp["intervals"] = std::move(iv);
    arr.push_back(std::move(jp));
  }
  return (profiles.size() == 1 ? arr[0] : arr).dump(2) + "\n";
}

}  // namespace gasplan
