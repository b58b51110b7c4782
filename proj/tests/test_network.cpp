// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "gasplan/instance_io.hpp"
#include "gasplan/network.hpp"
#include "gasplan/rng.hpp"
#include "support/builders.hpp"

using namespace gasplan;

TEST_CASE("resistance matches the closed form") {
  Pipe p = testing::make_pipe("p", "a", "b", 1000.0, 0.5, 10.0);
  p.friction_factor = 0.0025;
  const double expect = 4.0 * 0.0025 * 1000.0 * 350.0 * 350.0 /
                        (std::numbers::pi * std::numbers::pi * std::pow(0.5, 5.0));
  CHECK(resistance(p, 350.0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(resistance(p, 350.0) == doctest::Approx(3.9717e6).epsilon(1e-3));

  p.friction_factor = 0.0;
  CHECK(resistance(p, 350.0) == 0.0);
}

TEST_CASE("resistance scaling in length and diameter") {
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    Pipe p = testing::make_pipe("p", "a", "b", rng.uniform(100, 9e4),
                                rng.uniform(0.1, 1.2), 10.0);
    p.friction_factor = rng.uniform(1e-3, 2e-2);
    const double a = rng.uniform(250, 420);
    const double w = resistance(p, a);
    Pipe dbl = p;
    dbl.length *= 2.0;
    CHECK(resistance(dbl, a) == doctest::Approx(2.0 * w).epsilon(1e-12));
    Pipe half = p;
    half.diameter *= 0.5;
    CHECK(resistance(half, a) == doctest::Approx(32.0 * w).epsilon(1e-12));
    // strictly monotone in friction, length, sound speed; decreasing in D
    Pipe fr = p;
    fr.friction_factor *= 1.1;
    CHECK(resistance(fr, a) > w);
    CHECK(resistance(p, a * 1.1) > w);
    Pipe wide = p;
    wide.diameter *= 1.1;
    CHECK(resistance(wide, a) < w);
  }
}

TEST_CASE("resistance rejects degenerate geometry") {
  Pipe p = testing::make_pipe("p", "a", "b", 1000.0, 0.5, 10.0);
  p.diameter = 0.0;
  CHECK_THROWS_AS(resistance(p, 350.0), ValidationError);
  p.diameter = 0.5;
  p.length = -1.0;
  CHECK_THROWS_AS(resistance(p, 350.0), ValidationError);
}

TEST_CASE("expansion cost model") {
  Pipe p = testing::make_pipe("p", "a", "b", 1000.0, 0.5, 10.0,
                              ComponentStatus::kCandidate);
  // 1000 m at 500 mm
  CHECK(expansion_cost(p) == doctest::Approx(17033.8).epsilon(1e-4));
  p.length = 0.0;
  CHECK(expansion_cost(p) == 0.0);
  p.build_cost = 42.0;
  p.diameter = -5.0;  // override wins regardless of geometry
  CHECK(expansion_cost(p) == 42.0);

  Pipe bad = testing::make_pipe("q", "a", "b", 1000.0, 0.5, 10.0,
                                ComponentStatus::kCandidate);
  bad.diameter = 0.0;
  CHECK_THROWS_AS(expansion_cost(bad), ValidationError);
  CHECK(expansion_cost(testing::make_comp("c", "a", "b", 1.5, 10.0,
                                          ComponentStatus::kCandidate)) > 0.0);
}

TEST_CASE("validate flags bound and connectivity defects") {
  auto net = testing::two_node_line();
  CHECK(validate(*net).empty());

  std::vector<Node> nodes{testing::make_source("n1", 40, 70),
                          testing::make_node("n2", 25, 70, 5.0)};
  nodes[1].pressure_sq_min = 2.0 * nodes[1].pressure_sq_max;  // inverted bounds
  Network bad("bad", std::move(nodes),
              {testing::make_pipe("p1", "n1", "n2", 1000, 0.6, 10.0)}, {}, {"n1"},
              350.0);
  auto findings = validate(bad);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].code == "pressure_bounds");
  CHECK(findings[0].where == "n2");

  // Disconnected existing graph.
  std::vector<Node> nodes2{testing::make_source("n1", 40, 70),
                           testing::make_node("n2", 25, 70, 5.0),
                           testing::make_node("n3", 25, 70, 1.0)};
  Network disc("disc", std::move(nodes2),
               {testing::make_pipe("p1", "n1", "n2", 1000, 0.6, 10.0),
                testing::make_pipe("p2", "n2", "n3", 1000, 0.6, 10.0,
                                   ComponentStatus::kCandidate)},
               {}, {"n1"}, 350.0);
  // n3 is reachable only through a candidate: allowed (it is an expansion
  // target), so the only requirement is that existing-touched nodes connect.
  CHECK(validate(disc).empty());

  std::vector<Node> nodes3{testing::make_source("n1", 40, 70),
                           testing::make_node("n2", 25, 70, 5.0),
                           testing::make_node("n3", 25, 70, 1.0)};
  Network disc2("disc2", std::move(nodes3),
                {testing::make_pipe("p1", "n1", "n2", 1000, 0.6, 10.0),
                 testing::make_pipe("p2", "n3", "n3x", 1000, 0.6, 10.0)},
                {}, {"n1"}, 350.0);
  auto f2 = validate(disc2);
  CHECK(!f2.empty());
}

TEST_CASE("instance loader round-trips and reports paths") {
  auto net = testing::two_node_line();
  const std::string text = serialize(*net);
  std::istringstream in(text);
  Network back = load_instance(in);
  CHECK(serialize(back) == text);
  CHECK(back.nodes().size() == 2);
  CHECK(back.pipes().size() == 1);
  CHECK(back.slack_nodes() == std::vector<std::string>{"n1"});
  CHECK(back.pipe_resistance(0) == doctest::Approx(net->pipe_resistance(0)));

  // Unknown endpoint must name the offending pipe.
  std::string broken = text;
  auto pos = broken.find("\"to\": \"n2\"");
  REQUIRE(pos != std::string::npos);
  broken.replace(pos, 10, "\"to\": \"zz\"");
  std::istringstream bin(broken);
  try {
    load_instance(bin);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("p1") != std::string::npos);
  }

  // Duplicate id.
  std::string dup = text;
  pos = dup.find("\"id\": \"n2\"");
  REQUIRE(pos != std::string::npos);
  dup.replace(pos, 10, "\"id\": \"n1\"");
  std::istringstream din(dup);
  CHECK_THROWS_AS(load_instance(din), ValidationError);
}

TEST_CASE("minimal two-node document loads") {
  const char* doc = R"({
    "meta": {"name": "mini", "units": "SI"},
    "sound_speed": 350.0,
    "slack_nodes": ["a"],
    "nodes": [
      {"id": "a", "pressure_sq_min": 1e13, "pressure_sq_max": 5e13,
       "roles": ["receipt", "generation"]},
      {"id": "b", "pressure_sq_min": 1e13, "pressure_sq_max": 5e13,
       "roles": ["delivery"], "nominal_demand": 3.0}
    ],
    "pipes": [
      {"id": "p", "from": "a", "to": "b", "length": 1000, "diameter": 0.5,
       "friction_factor": 0.0025, "flow_max": 20, "status": "existing"}
    ],
    "compressors": []
  })";
  std::istringstream in(doc);
  Network net = load_instance(in);
  CHECK(net.nodes().size() == 2);
  CHECK(net.pipes().size() == 1);
  CHECK(net.candidate_ids().empty());
}
