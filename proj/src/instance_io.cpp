// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include "gasplan/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gasplan {

namespace {

using nlohmann::ordered_json;

double num_field(const ordered_json& obj, const std::string& path,
                 const std::string& key, bool required, double fallback) {
  if (!obj.contains(key)) {
    if (required) throw ValidationError(path + "." + key + ": missing field");
    return fallback;
  }
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ValidationError(path + "." + key + ": expected a number");
  return v.get<double>();
}

std::string str_field(const ordered_json& obj, const std::string& path,
                      const std::string& key) {
  if (!obj.contains(key) || !obj.at(key).is_string())
    throw ValidationError(path + "." + key + ": missing or non-string field");
  return obj.at(key).get<std::string>();
}

ComponentStatus status_field(const ordered_json& obj, const std::string& path) {
  std::string s = str_field(obj, path, "status");
  if (s == "existing") return ComponentStatus::kExisting;
  if (s == "candidate") return ComponentStatus::kCandidate;
  throw ValidationError(path + ".status: expected \"existing\" or \"candidate\"");
}

}  // namespace

Network load_instance(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("instance document is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object()) throw ValidationError("$: expected a JSON object");
  for (const char* key : {"meta", "nodes", "pipes", "compressors", "slack_nodes",
                          "sound_speed"})
    if (!doc.contains(key))
      throw ValidationError(std::string("$.") + key + ": missing field");

  std::string name = doc["meta"].is_object() && doc["meta"].contains("name")
                         ? doc["meta"]["name"].get<std::string>()
                         : "unnamed";
  if (doc["meta"].contains("units") &&
      doc["meta"]["units"].get<std::string>() != "SI")
    throw ValidationError("meta.units: only \"SI\" is supported");

  std::vector<Node> nodes;
  {
    const auto& arr = doc["nodes"];
    if (!arr.is_array()) throw ValidationError("nodes: expected an array");
    int k = 0;
    for (const auto& jn : arr) {
      std::string path = "nodes[" + std::to_string(k++) + "]";
      Node n;
      n.id = str_field(jn, path, "id");
      n.pressure_sq_min = num_field(jn, path, "pressure_sq_min", true, 0);
      n.pressure_sq_max = num_field(jn, path, "pressure_sq_max", true, 0);
      if (jn.contains("roles")) {
        if (!jn["roles"].is_array())
          throw ValidationError(path + ".roles: expected an array");
        for (const auto& r : jn["roles"]) {
          std::string role = r.get<std::string>();
          if (role == "generation") n.is_generation = true;
          else if (role == "receipt") n.is_receipt = true;
          else if (role == "delivery") n.is_delivery = true;
          else throw ValidationError(path + ".roles: unknown role " + role);
        }
      }
      n.nominal_demand = num_field(jn, path, "nominal_demand", false, 0.0);
      n.supply_min = num_field(jn, path, "supply_min", false, 0.0);
      n.supply_max = jn.contains("supply_max")
                         ? num_field(jn, path, "supply_max", false, kInf)
                         : kInf;
      nodes.push_back(std::move(n));
    }
  }

  std::vector<Pipe> pipes;
  {
    const auto& arr = doc["pipes"];
    if (!arr.is_array()) throw ValidationError("pipes: expected an array");
    int k = 0;
    for (const auto& jp : arr) {
      std::string path = "pipes[" + std::to_string(k++) + "]";
      Pipe p;
      p.id = str_field(jp, path, "id");
      p.from = str_field(jp, path, "from");
      p.to = str_field(jp, path, "to");
      p.length = num_field(jp, path, "length", true, 0);
      p.diameter = num_field(jp, path, "diameter", true, 0);
      p.friction_factor = num_field(jp, path, "friction_factor", true, 0);
      p.flow_max = num_field(jp, path, "flow_max", true, 0);
      p.status = status_field(jp, path);
      if (jp.contains("build_cost"))
        p.build_cost = num_field(jp, path, "build_cost", false, 0.0);
      pipes.push_back(std::move(p));
    }
  }

  std::vector<Compressor> comps;
  {
    const auto& arr = doc["compressors"];
    if (!arr.is_array()) throw ValidationError("compressors: expected an array");
    int k = 0;
    for (const auto& jc : arr) {
      std::string path = "compressors[" + std::to_string(k++) + "]";
      Compressor c;
      c.id = str_field(jc, path, "id");
      c.from = str_field(jc, path, "from");
      c.to = str_field(jc, path, "to");
      c.ratio_sq_min = num_field(jc, path, "ratio_sq_min", true, 1);
      c.ratio_sq_max = num_field(jc, path, "ratio_sq_max", true, 1);
      c.flow_max = num_field(jc, path, "flow_max", true, 0);
      c.status = status_field(jc, path);
      if (jc.contains("build_cost"))
        c.build_cost = num_field(jc, path, "build_cost", false, 0.0);
      c.length = num_field(jc, path, "length", false, 0.0);
      c.diameter = num_field(jc, path, "diameter", false, 0.0);
      comps.push_back(std::move(c));
    }
  }

  std::vector<std::string> slack;
  if (!doc["slack_nodes"].is_array())
    throw ValidationError("slack_nodes: expected an array");
  for (const auto& s : doc["slack_nodes"]) slack.push_back(s.get<std::string>());

  double sound_speed = doc["sound_speed"].get<double>();

  Network net(name, std::move(nodes), std::move(pipes), std::move(comps),
              std::move(slack), sound_speed);
  auto findings = validate(net);
  if (!findings.empty()) {
    std::ostringstream msg;
    msg << "instance failed validation:";
    for (const auto& f : findings)
      msg << "\n  [" << f.code << "] " << f.where << ": " << f.message;
    throw ValidationError(msg.str());
  }
  return net;
}

Network load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  return load_instance(in);
}

std::string serialize(const Network& net) {
  ordered_json doc;
  doc["meta"] = {{"name", net.name()}, {"units", "SI"}};
  doc["sound_speed"] = net.sound_speed();
  doc["slack_nodes"] = net.slack_nodes();
  doc["nodes"] = ordered_json::array();
  for (const auto& n : net.nodes()) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["pressure_sq_min"] = n.pressure_sq_min;
    jn["pressure_sq_max"] = n.pressure_sq_max;
    auto roles = ordered_json::array();
    if (n.is_generation) roles.push_back("generation");
    if (n.is_receipt) roles.push_back("receipt");
    if (n.is_delivery) roles.push_back("delivery");
    jn["roles"] = roles;
    if (n.nominal_demand != 0.0) jn["nominal_demand"] = n.nominal_demand;
    if (n.supply_min != 0.0) jn["supply_min"] = n.supply_min;
    if (n.supply_max != kInf) jn["supply_max"] = n.supply_max;
    doc["nodes"].push_back(std::move(jn));
  }
  doc["pipes"] = ordered_json::array();
  for (const auto& p : net.pipes()) {
    ordered_json jp;
    jp["id"] = p.id;
    jp["from"] = p.from;
    jp["to"] = p.to;
    jp["length"] = p.length;
    jp["diameter"] = p.diameter;
    jp["friction_factor"] = p.friction_factor;
    jp["flow_max"] = p.flow_max;
    jp["status"] = p.status == ComponentStatus::kExisting ? "existing" : "candidate";
    if (p.build_cost) jp["build_cost"] = *p.build_cost;
    doc["pipes"].push_back(std::move(jp));
  }
  doc["compressors"] = ordered_json::array();
  for (const auto& c : net.compressors()) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["from"] = c.from;
    jc["to"] = c.to;
    jc["ratio_sq_min"] = c.ratio_sq_min;
    jc["ratio_sq_max"] = c.ratio_sq_max;
    jc["flow_max"] = c.flow_max;
    jc["status"] = c.status == ComponentStatus::kExisting ? "existing" : "candidate";
    if (c.build_cost) jc["build_cost"] = *c.build_cost;
    if (c.length != 0.0) jc["length"] = c.length;
    if (c.diameter != 0.0) jc["diameter"] = c.diameter;
    doc["compressors"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

}  // namespace gasplan
