// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// Independent dense-tableau simplex used only as a test oracle. Solves
//   min c'x  s.t.  A x <= b,  0 <= x <= u
// by the classic two-phase method with artificials and Bland's rule. Shares
// no code with the production solver on purpose.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace gasplan::testing {

struct DenseLp {
  int n = 0;                                  // structural variables
  std::vector<std::vector<double>> a;         // m x n
  std::vector<double> b;                      // m
  std::vector<double> c;                      // n
  std::vector<double> u;                      // upper bounds, size n
};

// Returns the optimal objective, or nullopt if infeasible (the generator
// never produces unbounded problems: the box caps everything).
inline std::optional<double> dense_tableau_solve(const DenseLp& in) {
  // Rows: A x + s = b  (m rows), x + t = u (n rows). Negative rhs rows are
  // flipped and given artificials.
  const int m_all = static_cast<int>(in.b.size()) + in.n;
  const int n_struct = in.n;
  std::vector<std::vector<double>> rows(m_all);
  std::vector<double> rhs(m_all);
  for (int r = 0; r < static_cast<int>(in.b.size()); ++r) {
    rows[r] = in.a[r];
    rhs[r] = in.b[r];
  }
  for (int j = 0; j < in.n; ++j) {
    rows[in.b.size() + j].assign(in.n, 0.0);
    rows[in.b.size() + j][j] = 1.0;
    rhs[in.b.size() + j] = in.u[j];
  }
  // Column layout: structural | slack per row | artificial per flipped row.
  std::vector<int> art_of_row(m_all, -1);
  int n_art = 0;
  for (int r = 0; r < m_all; ++r)
    if (rhs[r] < 0) art_of_row[r] = n_art++;
  const int n_total = n_struct + m_all + n_art;

  std::vector<std::vector<double>> t(m_all, std::vector<double>(n_total + 1, 0.0));
  std::vector<int> basis(m_all);
  for (int r = 0; r < m_all; ++r) {
    const double sign = rhs[r] < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n_struct; ++j) t[r][j] = sign * rows[r][j];
    t[r][n_struct + r] = sign;  // slack
    t[r][n_total] = sign * rhs[r];
    if (art_of_row[r] >= 0) {
      t[r][n_struct + m_all + art_of_row[r]] = 1.0;
      basis[r] = n_struct + m_all + art_of_row[r];
    } else {
      basis[r] = n_struct + r;
    }
  }

  auto pivot = [&](int pr, int pc) {
    const double p = t[pr][pc];
    for (double& v : t[pr]) v /= p;
    for (int r = 0; r < m_all; ++r) {
      if (r == pr) continue;
      const double f = t[r][pc];
      if (f == 0.0) continue;
      for (int c2 = 0; c2 <= n_total; ++c2) t[r][c2] -= f * t[pr][c2];
    }
    basis[pr] = pc;
  };

  auto run_phase = [&](const std::vector<double>& cost, int n_price) -> bool {
    for (int iter = 0; iter < 20000; ++iter) {
      // Reduced costs via the basis cost row.
      std::vector<double> z(n_price, 0.0);
      for (int j = 0; j < n_price; ++j) {
        double zj = 0.0;
        for (int r = 0; r < m_all; ++r) zj += cost[basis[r]] * t[r][j];
        z[j] = cost[j] - zj;
      }
      int pc = -1;
      for (int j = 0; j < n_price; ++j)  // Bland: first improving column
        if (z[j] < -1e-9) { pc = j; break; }
      if (pc < 0) return true;
      int pr = -1;
      double best = 0.0;
      for (int r = 0; r < m_all; ++r) {
        if (t[r][pc] > 1e-9) {
          const double ratio = t[r][n_total] / t[r][pc];
          if (pr < 0 || ratio < best - 1e-12 ||
              (ratio < best + 1e-12 && basis[r] < basis[pr])) {
            pr = r;
            best = ratio;
          }
        }
      }
      if (pr < 0) return false;  // unbounded phase objective
      pivot(pr, pc);
    }
    return false;
  };

  if (n_art > 0) {
    std::vector<double> phase1(n_total, 0.0);
    for (int k = 0; k < n_art; ++k) phase1[n_struct + m_all + k] = 1.0;
    if (!run_phase(phase1, n_total)) return std::nullopt;
    double infeas = 0.0;
    for (int r = 0; r < m_all; ++r)
      if (basis[r] >= n_struct + m_all) infeas += t[r][n_total];
    if (infeas > 1e-7) return std::nullopt;
  }
  // Artificials are priced out of phase 2 entirely.
  std::vector<double> phase2(n_total, 0.0);
  for (int j = 0; j < n_struct; ++j) phase2[j] = in.c[j];
  if (!run_phase(phase2, n_struct + m_all)) return std::nullopt;
  double obj = 0.0;
  for (int r = 0; r < m_all; ++r)
    if (basis[r] < n_struct) obj += in.c[basis[r]] * t[r][n_total];
  return obj;
}

}  // namespace gasplan::testing
