// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"
#include "gasplan/lp_solver.hpp"
#include "gasplan/rng.hpp"
#include "support/lp_oracle.hpp"

using namespace gasplan;

namespace {

LinearProgram min_x_geq_3() {
  LinearProgram lp;
  lp.num_cols = 1;
  lp.col_lower = {-kInf};
  lp.col_upper = {kInf};
  lp.objective = {1.0};
  lp.rows.push_back({{{0, 1.0}}, 'G', 3.0});
  return lp;
}

// Random box-feasible all-<= LP shared with the dense oracle.
testing::DenseLp random_dense(Rng& rng, int n, int m) {
  testing::DenseLp d;
  d.n = n;
  d.a.assign(m, std::vector<double>(n, 0.0));
  d.b.assign(m, 0.0);
  d.c.assign(n, 0.0);
  d.u.assign(n, 0.0);
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    d.u[j] = rng.uniform(0.5, 10.0);
    x0[j] = rng.uniform(0.0, d.u[j]);
    d.c[j] = rng.uniform(-5.0, 5.0);
  }
  for (int r = 0; r < m; ++r) {
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (rng.next_unit() < 0.3) continue;
      d.a[r][j] = rng.uniform(-2.0, 2.0);
      act += d.a[r][j] * x0[j];
    }
    d.b[r] = act + rng.uniform(0.0, 4.0);  // x0 stays feasible
  }
  return d;
}

LinearProgram to_lp(const testing::DenseLp& d) {
  LinearProgram lp;
  lp.num_cols = d.n;
  lp.col_lower.assign(d.n, 0.0);
  lp.col_upper = d.u;
  lp.objective = d.c;
  for (std::size_t r = 0; r < d.b.size(); ++r) {
    LinearProgram::Row row;
    for (int j = 0; j < d.n; ++j)
      if (d.a[r][j] != 0.0) row.coeffs.push_back({j, d.a[r][j]});
    row.sense = 'L';
    row.rhs = d.b[r];
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

}  // namespace

TEST_CASE("textbook one-liners") {
  auto s = lp_solve(min_x_geq_3());
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));

  LinearProgram lp;  // max x + y s.t. x + y <= 1, box [0,1]^2
  lp.num_cols = 2;
  lp.col_lower = {0.0, 0.0};
  lp.col_upper = {1.0, 1.0};
  lp.objective = {-1.0, -1.0};  // minimize the negation
  lp.rows.push_back({{{0, 1.0}, {1, 1.0}}, 'L', 1.0});
  auto s2 = lp_solve(lp);
  REQUIRE(s2.status == LpStatus::kOptimal);
  CHECK(s2.objective == doctest::Approx(-1.0));
}

TEST_CASE("equality rows and duals on a known LP") {
  // min 2x + 3y s.t. x + y = 4, x <= 3, y <= 5, x,y >= 0. Optimum x=3, y=1.
  LinearProgram lp;
  lp.num_cols = 2;
  lp.col_lower = {0.0, 0.0};
  lp.col_upper = {3.0, 5.0};
  lp.objective = {2.0, 3.0};
  lp.rows.push_back({{{0, 1.0}, {1, 1.0}}, 'E', 4.0});
  auto s = lp_solve(lp);
  REQUIRE(s.status == LpStatus::kOptimal);
  CHECK(s.x[0] == doctest::Approx(3.0));
  CHECK(s.x[1] == doctest::Approx(1.0));
  CHECK(s.objective == doctest::Approx(9.0));
  REQUIRE(s.dual.size() == 1);
  // The equality's multiplier prices the marginal unit through y.
  CHECK(s.dual[0] == doctest::Approx(3.0));
}

TEST_CASE("infeasible and unbounded detection") {
  LinearProgram lp;
  lp.num_cols = 1;
  lp.col_lower = {0.0};
  lp.col_upper = {1.0};
  lp.objective = {1.0};
  lp.rows.push_back({{{0, 1.0}}, 'G', 2.0});
  auto s = lp_solve(lp);
  CHECK(s.status == LpStatus::kInfeasible);
  CHECK(!s.certificate.empty());

  LinearProgram ub;
  ub.num_cols = 1;
  ub.col_lower = {-kInf};
  ub.col_upper = {kInf};
  ub.objective = {-1.0};
  ub.rows.push_back({{{0, 1.0}}, 'G', 0.0});
  CHECK(lp_solve(ub).status == LpStatus::kUnbounded);
}

TEST_CASE("agrees with the dense tableau oracle on random 20x20 LPs") {
  Rng rng(20260810);
  int solved = 0;
  for (int t = 0; t < 60; ++t) {
    auto d = random_dense(rng, 20, 20);
    auto expect = testing::dense_tableau_solve(d);
    REQUIRE(expect.has_value());  // built feasible by construction
    auto got = lp_solve(to_lp(d));
    REQUIRE(got.status == LpStatus::kOptimal);
    CHECK(std::fabs(got.objective - *expect) <=
          1e-6 * std::max(1.0, std::fabs(*expect)));
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("primal residuals stay tight after many incremental rows") {
  Rng rng(7);
  auto d = random_dense(rng, 15, 10);
  LpEngine engine(to_lp(d));
  auto s = engine.solve();
  REQUIRE(s.status == LpStatus::kOptimal);
  double last = s.objective;
  for (int round = 0; round < 30; ++round) {
    // Random valid-ish cuts: sum of a few vars bounded by box mass.
    LinearProgram::Row row;
    double cap = 0.0;
    for (int j = 0; j < d.n; ++j) {
      if (rng.next_unit() < 0.6) continue;
      row.coeffs.push_back({j, 1.0});
      cap += d.u[j];
    }
    if (row.coeffs.empty()) continue;
    row.sense = 'L';
    row.rhs = cap * rng.uniform(0.5, 1.0);
    engine.add_row(row);
    s = engine.solve();
    REQUIRE(s.status == LpStatus::kOptimal);
    CHECK(s.objective >= last - 1e-7);  // rows only shrink the feasible set
    last = s.objective;
  }
}

TEST_CASE("bound changes rewarm correctly") {
  Rng rng(11);
  auto d = random_dense(rng, 12, 12);
  auto lp = to_lp(d);
  LpEngine engine(lp);
  auto base = engine.solve();
  REQUIRE(base.status == LpStatus::kOptimal);
  for (int t = 0; t < 20; ++t) {
    int j = static_cast<int>(rng.below(12));
    double v = rng.next_unit() < 0.5 ? 0.0 : d.u[j];
    engine.set_col_bounds(j, v, v);
    auto s1 = engine.solve();
    LinearProgram cold = lp;
    cold.col_lower[j] = cold.col_upper[j] = v;
    auto s2 = lp_solve(cold);
    REQUIRE(s1.status == s2.status);
    if (s1.status == LpStatus::kOptimal)
      CHECK(s1.objective == doctest::Approx(s2.objective).epsilon(1e-8));
    engine.set_col_bounds(j, lp.col_lower[j], lp.col_upper[j]);
  }
}
