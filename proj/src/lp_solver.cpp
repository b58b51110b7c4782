// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
//
// Bounded-variable revised primal simplex with a dense explicit basis
// inverse. Sized for the models this project produces (a few hundred to a
// couple of thousand rows): FTRAN against sparse columns is cheap, BTRAN and
// the rank-1 inverse update are the m^2 costs per pivot. Rows only ever get
// appended (cuts, no-goods), which keeps one factorization valid across an
// entire branch-and-bound tree; node changes are pure bound changes.
#include "gasplan/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace gasplan {

namespace {
constexpr double kFeasTol = 1e-9;   // scaled primal feasibility
constexpr double kDualTol = 1e-9;   // scaled reduced-cost threshold
constexpr double kPivotTol = 1e-9;  // minimum pivot magnitude
constexpr double kResidualTol = 1e-7;  // spec: post-scaling residual bound
constexpr int kRefactorInterval = 400;
constexpr int kBlandTrigger = 60;
}  // namespace

LpEngine::LpEngine(const LinearProgram& lp) {
  n_struct_ = lp.num_cols;
  cols_.assign(n_struct_, {});
  col_scale_.assign(n_struct_, 1.0);
  lower_ = lp.col_lower;
  upper_ = lp.col_upper;
  obj_ = lp.objective;
  lower_.resize(n_struct_, 0.0);
  upper_.resize(n_struct_, 0.0);
  obj_.resize(n_struct_, 0.0);
  total_cols_ = n_struct_;

  compute_scaling(lp);
  for (int j = 0; j < n_struct_; ++j) {
    const double c = col_scale_[j];
    if (lower_[j] > -kInf) lower_[j] /= c;
    if (upper_[j] < kInf) upper_[j] /= c;
    obj_[j] *= c;
  }
  for (const auto& row : lp.rows) add_row_internal_scaled(row);
  if (!lp.basis_hint.empty()) install_hint(lp.basis_hint);
}

// --- scaling ---------------------------------------------------------------

void LpEngine::compute_scaling(const LinearProgram& lp) {
  // Column scales seeded from bounds (squared pressures sit near 1e13 and
  // flows near 1e2 in the same model; bounds are the best a-priori scale),
  // then refined so no column's largest scaled entry strays far from 1.
  for (int j = 0; j < n_struct_; ++j) {
    double m = 0.0;
    if (lp.col_lower[j] > -kInf) m = std::max(m, std::fabs(lp.col_lower[j]));
    if (lp.col_upper[j] < kInf) m = std::max(m, std::fabs(lp.col_upper[j]));
    col_scale_[j] = std::clamp(m, 1.0, 1e14);
  }
  std::vector<double> col_max(n_struct_, 0.0);
  std::vector<double> row_inv(lp.rows.size(), 1.0);
  for (std::size_t r = 0; r < lp.rows.size(); ++r) {
    double m = 0.0;
    for (const auto& [j, a] : lp.rows[r].coeffs)
      m = std::max(m, std::fabs(a) * col_scale_[j]);
    row_inv[r] = m > 0 ? 1.0 / m : 1.0;
    for (const auto& [j, a] : lp.rows[r].coeffs)
      col_max[j] = std::max(col_max[j], std::fabs(a) * col_scale_[j] * row_inv[r]);
  }
  for (int j = 0; j < n_struct_; ++j) {
    if (col_max[j] > 0 && (col_max[j] < 1e-4 || col_max[j] > 1e4))
      col_scale_[j] /= col_max[j];
  }
}

void LpEngine::add_row_internal_scaled(const LinearProgram::Row& row) {
  const int r = static_cast<int>(rows_.size());
  double m = 0.0;
  for (const auto& [j, a] : row.coeffs)
    m = std::max(m, std::fabs(a) * col_scale_[j]);
  const double rscale = m > 0 ? 1.0 / m : 1.0;

  for (const auto& [j, a] : row.coeffs) {
    if (a == 0.0) continue;
    cols_[j].push_back({r, a * col_scale_[j] * rscale});
  }
  rows_.push_back({row.sense, row.rhs * rscale, rscale});

  // Logical column: +1 in scaled row space.
  cols_.push_back({{r, 1.0}});
  col_scale_.push_back(1.0 / rscale);
  obj_.push_back(0.0);
  switch (row.sense) {
    case 'L': lower_.push_back(0.0); upper_.push_back(kInf); break;
    case 'G': lower_.push_back(-kInf); upper_.push_back(0.0); break;
    case 'E': lower_.push_back(0.0); upper_.push_back(0.0); break;
    default: lower_.push_back(0.0); upper_.push_back(0.0); break;
  }
  ++total_cols_;

  if (has_basis_) extend_basis_for_row(r);
}

void LpEngine::add_row(const LinearProgram::Row& row) { add_row_internal_scaled(row); }

void LpEngine::set_col_bounds(int j, double lo, double hi) {
  const double c = col_scale_[j];
  lower_[j] = lo > -kInf ? lo / c : -kInf;
  upper_[j] = hi < kInf ? hi / c : kInf;
  if (vstat_.empty() || vstat_[j] == kBasic) return;
  // Keep the nonbasic status attached to a bound that still exists.
  if (vstat_[j] == kAtLower && lower_[j] == -kInf)
    vstat_[j] = upper_[j] < kInf ? kAtUpper : kFreeZero;
  if (vstat_[j] == kAtUpper && upper_[j] == kInf)
    vstat_[j] = lower_[j] > -kInf ? kAtLower : kFreeZero;
  if (vstat_[j] == kFreeZero && lower_[j] > -kInf) vstat_[j] = kAtLower;
}

std::pair<double, double> LpEngine::col_bounds(int j) const {
  const double c = col_scale_[j];
  return {lower_[j] > -kInf ? lower_[j] * c : -kInf,
          upper_[j] < kInf ? upper_[j] * c : kInf};
}

// --- basis handling ----------------------------------------------------------

void LpEngine::initial_basis() {
  const int m = num_rows();
  basic_.resize(m);
  vstat_.assign(total_cols_, kAtLower);
  for (int j = 0; j < total_cols_; ++j) {
    if (lower_[j] > -kInf) vstat_[j] = kAtLower;
    else if (upper_[j] < kInf) vstat_[j] = kAtUpper;
    else vstat_[j] = kFreeZero;
  }
  for (int r = 0; r < m; ++r) {
    basic_[r] = n_struct_ + r;
    vstat_[n_struct_ + r] = kBasic;
  }
  binv_.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m; ++r) binv_[static_cast<std::size_t>(r) * m + r] = 1.0;
  basic_pos_.assign(total_cols_, -1);
  for (int r = 0; r < m; ++r) basic_pos_[basic_[r]] = r;
  has_basis_ = true;
  pivots_since_refactor_ = 0;
}

void LpEngine::install_hint(const std::vector<std::int8_t>& hint) {
  const int m = num_rows();
  initial_basis();
  std::vector<int> wanted;
  for (int j = 0; j < n_struct_ && j < static_cast<int>(hint.size()); ++j)
    if (hint[j] == kBasic) wanted.push_back(j);
  if (static_cast<int>(wanted.size()) > m) return;
  // Swap hinted structurals into the basis greedily; fall back silently if
  // the result is singular.
  int r = 0;
  for (int j : wanted) {
    while (r < m && basic_pos_[n_struct_ + r] < 0) ++r;
    if (r >= m) break;
    int logical = n_struct_ + r;
    basic_[r] = j;
    basic_pos_[j] = r;
    basic_pos_[logical] = -1;
    vstat_[j] = kBasic;
    vstat_[logical] = lower_[logical] > -kInf ? kAtLower : kAtUpper;
    ++r;
  }
  if (!refactorize()) initial_basis();
  for (int j = 0; j < n_struct_ && j < static_cast<int>(hint.size()); ++j) {
    if (vstat_[j] == kBasic) continue;
    if (hint[j] == kAtUpper && upper_[j] < kInf) vstat_[j] = kAtUpper;
    else if (hint[j] == kAtLower && lower_[j] > -kInf) vstat_[j] = kAtLower;
  }
}

void LpEngine::extend_basis_for_row(int row) {
  const int m_old = row;  // rows 0..row-1 existed before
  const int m = m_old + 1;
  // New basis column: the new row's logical. Inverse gains the row
  // [-a_B * Binv_old, 1] where a_B holds the new row's entries on basic cols.
  std::vector<double> new_binv(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m_old; ++r)
    std::memcpy(&new_binv[static_cast<std::size_t>(r) * m], &binv_[static_cast<std::size_t>(r) * m_old],
                sizeof(double) * m_old);
  // Collect a_B from structural columns touched by the new row.
  std::vector<std::pair<int, double>> ab;  // (basis position, coeff)
  for (int j = 0; j < n_struct_; ++j) {
    if (basic_pos_[j] < 0) continue;
    for (const auto& [r, v] : cols_[j])
      if (r == row) {
        ab.push_back({basic_pos_[j], v});
        break;
      }
  }
  double* last = &new_binv[static_cast<std::size_t>(m_old) * m];
  for (const auto& [pos, v] : ab) {
    const double* brow = &binv_[static_cast<std::size_t>(pos) * m_old];
    for (int c = 0; c < m_old; ++c) last[c] -= v * brow[c];
  }
  last[m_old] = 1.0;
  binv_.swap(new_binv);

  const int logical = n_struct_ + row;
  basic_.push_back(logical);
  basic_pos_.resize(total_cols_, -1);
  basic_pos_[logical] = row;
  vstat_.resize(total_cols_, kAtLower);
  vstat_[logical] = kBasic;
  xb_.push_back(0.0);  // recomputed at next solve
}

bool LpEngine::refactorize() {
  const int m = num_rows();
  // Gauss-Jordan with partial pivoting on the basis matrix.
  std::vector<double> a(static_cast<std::size_t>(m) * m, 0.0);
  for (int p = 0; p < m; ++p)
    for (const auto& [r, v] : cols_[basic_[p]]) a[static_cast<std::size_t>(r) * m + p] = v;
  std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
  for (int r = 0; r < m; ++r) inv[static_cast<std::size_t>(r) * m + r] = 1.0;
  for (int k = 0; k < m; ++k) {
    int piv = -1;
    double best = 1e-11;
    for (int r = k; r < m; ++r) {
      double v = std::fabs(a[static_cast<std::size_t>(r) * m + k]);
      if (v > best) { best = v; piv = r; }
    }
    if (piv < 0) return false;
    if (piv != k) {
      for (int c = 0; c < m; ++c) {
        std::swap(a[static_cast<std::size_t>(piv) * m + c], a[static_cast<std::size_t>(k) * m + c]);
        std::swap(inv[static_cast<std::size_t>(piv) * m + c], inv[static_cast<std::size_t>(k) * m + c]);
      }
    }
    const double d = 1.0 / a[static_cast<std::size_t>(k) * m + k];
    for (int c = 0; c < m; ++c) {
      a[static_cast<std::size_t>(k) * m + c] *= d;
      inv[static_cast<std::size_t>(k) * m + c] *= d;
    }
    for (int r = 0; r < m; ++r) {
      if (r == k) continue;
      const double f = a[static_cast<std::size_t>(r) * m + k];
      if (f == 0.0) continue;
      for (int c = 0; c < m; ++c) {
        a[static_cast<std::size_t>(r) * m + c] -= f * a[static_cast<std::size_t>(k) * m + c];
        inv[static_cast<std::size_t>(r) * m + c] -= f * inv[static_cast<std::size_t>(k) * m + c];
      }
    }
  }
  binv_.swap(inv);
  pivots_since_refactor_ = 0;
  return true;
}

double LpEngine::nonbasic_value(int j) const {
  switch (vstat_[j]) {
    case kAtLower: return lower_[j];
    case kAtUpper: return upper_[j];
    default: return 0.0;
  }
}

void LpEngine::compute_basic_values() {
  const int m = num_rows();
  std::vector<double> rhs(m);
  for (int r = 0; r < m; ++r) rhs[r] = rows_[r].rhs_scaled;
  for (int j = 0; j < total_cols_; ++j) {
    if (vstat_[j] == kBasic) continue;
    const double v = nonbasic_value(j);
    if (v == 0.0) continue;
    for (const auto& [r, a] : cols_[j]) rhs[r] -= a * v;
  }
  xb_.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    const double* brow = &binv_[static_cast<std::size_t>(r) * m];
    double s = 0.0;
    for (int c = 0; c < m; ++c) s += brow[c] * rhs[c];
    xb_[r] = s;
  }
}

void LpEngine::ftran(int j, std::vector<double>& out) const {
  const int m = num_rows();
  out.assign(m, 0.0);
  for (const auto& [r, a] : cols_[j]) {
    for (int i = 0; i < m; ++i) out[i] += binv_[static_cast<std::size_t>(i) * m + r] * a;
  }
}

void LpEngine::btran(const std::vector<double>& c_b, std::vector<double>& out) const {
  const int m = num_rows();
  out.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    const double cb = c_b[r];
    if (cb == 0.0) continue;
    const double* brow = &binv_[static_cast<std::size_t>(r) * m];
    for (int c = 0; c < m; ++c) out[c] += cb * brow[c];
  }
}

// --- simplex ----------------------------------------------------------------

bool LpEngine::simplex_loop(bool phase1, LpSolution& sol) {
  const int m = num_rows();
  std::vector<double> cb(m), y(m), w(m);
  int degen_run = 0;
  bool bland = false;
  const std::int64_t iter_limit = 2000 + 200LL * (m + n_struct_);

  for (std::int64_t iter = 0;; ++iter) {
    if (iter > iter_limit) {
      sol.status = LpStatus::kNumericalFailure;
      return false;
    }
    // Cost of the current phase.
    double infeas = 0.0;
    for (int r = 0; r < m; ++r) {
      const int j = basic_[r];
      double c = 0.0;
      if (lower_[j] > -kInf && xb_[r] < lower_[j] - kFeasTol) {
        c = -1.0;
        infeas += lower_[j] - xb_[r];
      } else if (upper_[j] < kInf && xb_[r] > upper_[j] + kFeasTol) {
        c = 1.0;
        infeas += xb_[r] - upper_[j];
      } else if (!phase1) {
        c = obj_[j];
      }
      cb[r] = c;
    }
    if (phase1 && infeas <= kFeasTol) return true;  // primal feasible
    if (!phase1 && infeas > 1e-6) {
      // Basic feasibility degraded during phase 2; repair once.
      sol.status = LpStatus::kNumericalFailure;
      return false;
    }

    btran(cb, y);

    // Pricing.
    int enter = -1, dir = 0;
    double best = bland ? 0.0 : kDualTol;
    for (int j = 0; j < total_cols_; ++j) {
      const std::int8_t st = vstat_[j];
      if (st == kBasic) continue;
      if (lower_[j] == upper_[j]) continue;  // fixed
      double d = phase1 ? 0.0 : obj_[j];
      for (const auto& [r, a] : cols_[j]) d -= y[r] * a;
      int cand_dir = 0;
      if ((st == kAtLower || st == kFreeZero) && d < -kDualTol) cand_dir = +1;
      else if ((st == kAtUpper || st == kFreeZero) && d > kDualTol) cand_dir = -1;
      if (cand_dir == 0) continue;
      if (bland) { enter = j; dir = cand_dir; break; }
      if (std::fabs(d) > best) {
        best = std::fabs(d);
        enter = j;
        dir = cand_dir;
      }
    }
    if (enter < 0) {
      if (phase1) {
        if (infeas > 1e-7) {
          sol.status = LpStatus::kInfeasible;
          sol.certificate.assign(m, 0.0);
          for (int r = 0; r < m; ++r) sol.certificate[r] = -y[r] * rows_[r].scale;
          return false;
        }
        return true;
      }
      sol.status = LpStatus::kOptimal;
      return true;
    }

    ftran(enter, w);
    const double sigma = dir;

    // Ratio test: first blocking bound among basics, or the entering
    // variable's own opposite bound.
    double limit = kInf;
    int leave = -1;
    std::int8_t leave_status = kAtLower;
    double leave_pivot = 0.0;
    if (lower_[enter] > -kInf && upper_[enter] < kInf)
      limit = upper_[enter] - lower_[enter];
    for (int r = 0; r < m; ++r) {
      if (std::fabs(w[r]) <= kPivotTol) continue;
      const double rate = -sigma * w[r];
      const int j = basic_[r];
      const double v = xb_[r];
      double step = kInf;
      std::int8_t hits = kAtLower;
      const bool below = lower_[j] > -kInf && v < lower_[j] - kFeasTol;
      const bool above = upper_[j] < kInf && v > upper_[j] + kFeasTol;
      if (below) {
        if (rate > 0) { step = (lower_[j] - v) / rate; hits = kAtLower; }
      } else if (above) {
        if (rate < 0) { step = (upper_[j] - v) / rate; hits = kAtUpper; }
      } else if (rate > 0) {
        if (upper_[j] < kInf) { step = (upper_[j] - v) / rate; hits = kAtUpper; }
      } else {
        if (lower_[j] > -kInf) { step = (lower_[j] - v) / rate; hits = kAtLower; }
      }
      if (step == kInf) continue;
      step = std::max(step, 0.0);
      if (step < limit - 1e-12 ||
          (step < limit + 1e-12 &&
           (leave < 0 || std::fabs(w[r]) > std::fabs(leave_pivot) + 1e-12))) {
        limit = step;
        leave = r;
        leave_status = hits;
        leave_pivot = w[r];
      }
    }

    if (limit == kInf) {
      sol.status = phase1 ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
      return false;
    }

    ++total_iterations_;
    ++sol.iterations;
    if (limit <= 1e-12) {
      if (++degen_run > kBlandTrigger) bland = true;
    } else {
      degen_run = 0;
      bland = false;
    }

    if (leave < 0) {
      // Bound flip of the entering variable.
      for (int r = 0; r < m; ++r) xb_[r] -= sigma * limit * w[r];
      vstat_[enter] = vstat_[enter] == kAtLower ? kAtUpper : kAtLower;
      continue;
    }

    const double enter_val = nonbasic_value(enter) + sigma * limit;
    for (int r = 0; r < m; ++r) xb_[r] -= sigma * limit * w[r];
    const int leaving_col = basic_[leave];
    vstat_[leaving_col] = leave_status;
    basic_pos_[leaving_col] = -1;
    basic_[leave] = enter;
    basic_pos_[enter] = leave;
    vstat_[enter] = kBasic;
    xb_[leave] = enter_val;

    // Rank-1 update of the inverse.
    const double piv = w[leave];
    double* prow = &binv_[static_cast<std::size_t>(leave) * m];
    const double inv_piv = 1.0 / piv;
    for (int c = 0; c < m; ++c) prow[c] *= inv_piv;
    for (int r = 0; r < m; ++r) {
      if (r == leave) continue;
      const double f = w[r];
      if (f == 0.0) continue;
      double* row = &binv_[static_cast<std::size_t>(r) * m];
      for (int c = 0; c < m; ++c) row[c] -= f * prow[c];
    }
    if (++pivots_since_refactor_ >= kRefactorInterval) {
      if (!refactorize()) {
        initial_basis();
      }
      compute_basic_values();
    }
  }
}

LpSolution LpEngine::solve() {
  LpSolution sol;
  if (!has_basis_) initial_basis();
  compute_basic_values();

  for (int attempt = 0; attempt < 2; ++attempt) {
    if (!simplex_loop(true, sol)) {
      if (sol.status == LpStatus::kInfeasible) return finish_solution(sol);
      if (attempt == 0) {
        initial_basis();
        compute_basic_values();
        sol.status = LpStatus::kNumericalFailure;
        continue;
      }
      return finish_solution(sol);
    }
    if (!simplex_loop(false, sol)) {
      if (sol.status == LpStatus::kUnbounded) return finish_solution(sol);
      if (attempt == 0) {
        initial_basis();
        compute_basic_values();
        continue;
      }
      return finish_solution(sol);
    }
    // Optimal; verify residuals and return (or repair once).
    if (residuals_ok() || attempt == 1) {
      sol.status = LpStatus::kOptimal;
      return finish_solution(sol);
    }
    if (!refactorize()) initial_basis();
    compute_basic_values();
  }
  sol.status = LpStatus::kNumericalFailure;
  return finish_solution(sol);
}

bool LpEngine::residuals_ok() {
  const int m = num_rows();
  std::vector<double> act(m, 0.0);
  for (int j = 0; j < total_cols_; ++j) {
    const double v = vstat_[j] == kBasic ? xb_[basic_pos_[j]] : nonbasic_value(j);
    if (v == 0.0) continue;
    for (const auto& [r, a] : cols_[j]) act[r] += a * v;
  }
  for (int r = 0; r < m; ++r)
    if (std::fabs(act[r] - rows_[r].rhs_scaled) > kResidualTol) return false;
  for (int r = 0; r < m; ++r) {
    const int j = basic_[r];
    if (lower_[j] > -kInf && xb_[r] < lower_[j] - kResidualTol) return false;
    if (upper_[j] < kInf && xb_[r] > upper_[j] + kResidualTol) return false;
  }
  return true;
}

LpSolution LpEngine::finish_solution(LpSolution& sol) {
  const int m = num_rows();
  sol.x.assign(n_struct_, 0.0);
  for (int j = 0; j < n_struct_; ++j) {
    const double v = vstat_.empty()
                         ? 0.0
                         : (vstat_[j] == kBasic ? xb_[basic_pos_[j]] : nonbasic_value(j));
    double unscaled = v * col_scale_[j];
    if (std::isfinite(unscaled)) sol.x[j] = unscaled;
  }
  sol.objective = 0.0;
  for (int j = 0; j < n_struct_; ++j)
    sol.objective += sol.x[j] * (obj_[j] / col_scale_[j]);
  if (sol.status == LpStatus::kOptimal) {
    std::vector<double> cb(m), y(m);
    for (int r = 0; r < m; ++r) cb[r] = obj_[basic_[r]];
    btran(cb, y);
    sol.dual.assign(m, 0.0);
    for (int r = 0; r < m; ++r) sol.dual[r] = y[r] * rows_[r].scale;
  }
  sol.col_status.assign(n_struct_, kAtLower);
  if (!vstat_.empty())
    for (int j = 0; j < n_struct_; ++j) sol.col_status[j] = vstat_[j];
  return sol;
}

LpSolution lp_solve(const LinearProgram& lp) {
  LpEngine engine(lp);
  return engine.solve();
}

}  // namespace gasplan
