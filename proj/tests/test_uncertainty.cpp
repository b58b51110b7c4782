// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "gasplan/rng.hpp"
#include "gasplan/uncertainty.hpp"
#include "support/builders.hpp"

using namespace gasplan;

TEST_CASE("extremal scenarios take componentwise bounds") {
  DemandProfile p;
  p.profile_id = "k0";
  p.intervals["n1"] = {10.0, 12.0};
  p.intervals["n2"] = {3.0, 3.0};
  auto [lo, hi] = extremal_scenarios(p);
  CHECK(lo.demands.at("n1") == 10.0);
  CHECK(lo.demands.at("n2") == 3.0);
  CHECK(hi.demands.at("n1") == 12.0);
  CHECK(hi.demands.at("n2") == 3.0);
  CHECK(scenario_in_profile(lo, p));
  CHECK(scenario_in_profile(hi, p));

  DemandProfile degen;
  degen.profile_id = "d";
  degen.intervals["n1"] = {4.0, 4.0};
  auto [dlo, dhi] = extremal_scenarios(degen);
  CHECK(dlo.demands == dhi.demands);
}

TEST_CASE("scale_profile builds the demand box") {
  auto net = testing::two_node_line(100.0);
  DemandProfile p = scale_profile(*net, 0.95, 0.05);
  CHECK(p.interval("n2").first == doctest::Approx(90.25).epsilon(1e-12));
  CHECK(p.interval("n2").second == doctest::Approx(99.75).epsilon(1e-12));
  CHECK(p.interval("n1") == std::pair<double, double>{0.0, 0.0});

  DemandProfile e0 = scale_profile(*net, 0.95, 0.0);
  CHECK(e0.interval("n2").first == e0.interval("n2").second);
  CHECK(e0.interval("n2").first == doctest::Approx(95.0));

  DemandProfile winter = scale_profile(*net, 1.11, 0.01);
  CHECK(winter.interval("n2").first == doctest::Approx(109.89).epsilon(1e-12));
  CHECK(winter.interval("n2").second == doctest::Approx(112.11).epsilon(1e-12));

  CHECK_THROWS_AS(scale_profile(*net, 0.0, 0.05), ValidationError);
  CHECK_THROWS_AS(scale_profile(*net, 1.0, 1.0), ValidationError);
}

TEST_CASE("sampling is reproducible and stays in the box") {
  DemandProfile p;
  p.profile_id = "k0";
  p.intervals["a"] = {0.0, 1.0};
  p.intervals["b"] = {5.0, 9.0};

  auto s1 = sample(p, 200, 42);
  auto s2 = sample(p, 200, 42);
  REQUIRE(s1.size() == 200);
  for (std::size_t i = 0; i < s1.size(); ++i)
    CHECK(s1[i].demands == s2[i].demands);
  auto s3 = sample(p, 200, 43);
  bool differs = false;
  for (std::size_t i = 0; i < s1.size(); ++i)
    if (s1[i].demands != s3[i].demands) differs = true;
  CHECK(differs);

  auto [lo, hi] = extremal_scenarios(p);
  for (const auto& s : s1) {
    CHECK(scenario_in_profile(s, p));
    for (const auto& [node, d] : s.demands) {
      CHECK(d >= lo.demands.at(node));
      CHECK(d <= hi.demands.at(node));
    }
  }

  // Degenerate box: identical samples.
  DemandProfile degen;
  degen.profile_id = "d";
  degen.intervals["a"] = {2.0, 2.0};
  auto sd = sample(degen, 5, 1);
  for (const auto& s : sd) CHECK(s.demands.at("a") == 2.0);
}

TEST_CASE("per-node sample mean approaches the interval midpoint") {
  DemandProfile p;
  p.profile_id = "k0";
  for (int i = 0; i < 4; ++i) p.intervals["n" + std::to_string(i)] = {0.0, 1.0};
  auto draws = sample(p, 1000, 2026);
  for (const auto& [node, iv] : p.intervals) {
    double mean = 0.0;
    for (const auto& s : draws) mean += s.demands.at(node);
    mean /= double(draws.size());
    CHECK(std::fabs(mean - 0.5) < 0.05);
  }
}

TEST_CASE("center scenario is the box midpoint") {
  DemandProfile p;
  p.profile_id = "k0";
  p.intervals["a"] = {4.0, 6.0};
  CHECK(center_scenario(p).demands.at("a") == doctest::Approx(5.0));
}
