// Copyright 2026 gasplan contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gasplan/common.hpp"

namespace gasplan {

// Minimization LP with bounded variables. Rows are sparse; senses are
// 'L' (<=), 'E' (=), 'G' (>=). Infinite bounds use +/-inf.
struct LinearProgram {
  struct Row {
    std::vector<std::pair<int, double>> coeffs;
    char sense = 'L';
    double rhs = 0.0;
  };
  int num_cols = 0;
  std::vector<double> col_lower, col_upper, objective;
  std::vector<Row> rows;
  std::vector<std::int8_t> basis_hint;  // optional column statuses, see VStat
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

// Column status codes (also used for basis hints).
enum VStat : std::int8_t { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> dual;            // one multiplier per row
  std::vector<std::int8_t> col_status; // VStat per structural column
  // Phase-1 duals proving infeasibility (y with y^T A compatible and
  // y^T b strictly violated), populated when status == kInfeasible.
  std::vector<double> certificate;
  std::int64_t iterations = 0;
};

// One-shot solve. Deterministic given identical input. Primal/dual residuals
// of an optimal answer are <= 1e-7 after internal row scaling.
LpSolution lp_solve(const LinearProgram& lp);

// Incremental engine for branch and cut: the row set only ever grows (cuts
// and no-goods are globally valid), so the factorized basis stays reusable
// across bound changes, which is what makes node re-solves cheap.
class LpEngine {
 public:
  explicit LpEngine(const LinearProgram& lp);

  int num_cols() const { return n_struct_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  void set_col_bounds(int j, double lo, double hi);
  std::pair<double, double> col_bounds(int j) const;
  void add_row(const LinearProgram::Row& row);

  LpSolution solve();  // warm-starts from the current basis

  std::int64_t total_iterations() const { return total_iterations_; }

 private:
  struct RowData {
    char sense;
    double rhs_scaled;
    double scale;
  };

  int n_struct_ = 0;
  int total_cols_ = 0;  // structural + one logical per row
  // Scaled sparse columns, structural then logical, each a (row, value) list.
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<double> col_scale_;
  std::vector<RowData> rows_;
  std::vector<double> lower_, upper_;  // scaled bounds, all columns
  std::vector<double> obj_;            // scaled objective, all columns

  std::vector<int> basic_;             // basis column per row
  std::vector<int> basic_pos_;         // column -> basis row, -1 if nonbasic
  std::vector<std::int8_t> vstat_;     // per column
  std::vector<double> binv_;           // dense row-major m x m
  std::vector<double> xb_;             // basic values
  bool has_basis_ = false;
  int pivots_since_refactor_ = 0;
  std::int64_t total_iterations_ = 0;

  void compute_scaling(const LinearProgram& lp);
  void add_row_internal_scaled(const LinearProgram::Row& row);
  void install_hint(const std::vector<std::int8_t>& hint);
  void initial_basis();
  void extend_basis_for_row(int row);
  bool refactorize();
  void compute_basic_values();
  double nonbasic_value(int j) const;
  void ftran(int j, std::vector<double>& out) const;
  void btran(const std::vector<double>& c_b, std::vector<double>& out) const;
  bool simplex_loop(bool phase1, LpSolution& sol);
  bool residuals_ok();
  LpSolution finish_solution(LpSolution& sol);
};

}  // namespace gasplan
