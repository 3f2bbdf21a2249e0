#pragma once

// Dense two-phase primal simplex for small LPs of the form
//
//   maximize    c^T x
//   subject to  A x <= b,   lo <= x <= hi
//
// Variable bounds are handled natively (bounded-variable simplex); only the
// <= rows get slack columns. Lower bounds must be finite, upper bounds may be
// +inf. Entering and leaving variables follow Bland's rule, so the solver
// terminates on degenerate problems.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "semcom/errors.hpp"

namespace semcom::lp {

inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kOptimalityTol = 1e-10;
inline constexpr double kPivotTol = 1e-12;
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

class LinearProgram {
 public:
  LinearProgram() = default;

  LinearProgram(std::vector<double> objective, std::vector<std::vector<double>> rows,
                std::vector<double> rhs, std::vector<Bounds> bounds)
      : objective_(std::move(objective)),
        rows_(std::move(rows)),
        rhs_(std::move(rhs)),
        bounds_(std::move(bounds)) {
    if (bounds_.size() != objective_.size())
      throw ContractError("LP: one bound pair per variable is required");
    if (rows_.size() != rhs_.size()) throw ContractError("LP: one rhs entry per row is required");
    for (const auto& r : rows_)
      if (r.size() != objective_.size()) throw ContractError("LP: row length differs from variable count");
    for (const auto& bd : bounds_) {
      if (!std::isfinite(bd.lo)) throw ContractError("LP: lower bounds must be finite");
      if (!(bd.lo <= bd.hi)) throw ContractError("LP: lo > hi");
    }
  }

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<Bounds>& bounds() const { return bounds_; }

  void set_objective(std::vector<double> c) {
    if (c.size() != objective_.size()) throw ContractError("LP: objective length mismatch");
    objective_ = std::move(c);
  }

  double max_violation(const std::vector<double>& x) const {
    double worst = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
      worst = std::max(worst, bounds_[v].lo - x[v]);
      worst = std::max(worst, x[v] - bounds_[v].hi);
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      double lhs = 0.0;
      for (std::size_t v = 0; v < x.size(); ++v) lhs += rows_[r][v] * x[v];
      worst = std::max(worst, lhs - rhs_[r]);
    }
    return worst;
  }

 private:
  std::vector<double> objective_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> rhs_;
  std::vector<Bounds> bounds_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  int pivots = 0;
};

namespace detail {

// Tableau over shifted variables z = x - lo, so every column has bounds
// [0, upper]. Columns: structural, then one slack per row, then artificials.
class BoundedTableau {
 public:
  explicit BoundedTableau(const LinearProgram& lp) : n_(lp.num_vars()), m_(lp.num_rows()) {
    std::vector<double> shifted_rhs(m_);
    std::size_t num_art = 0;
    for (std::size_t r = 0; r < m_; ++r) {
      double v = lp.rhs()[r];
      for (std::size_t j = 0; j < n_; ++j) v -= lp.rows()[r][j] * lp.bounds()[j].lo;
      shifted_rhs[r] = v;
      if (v < 0.0) ++num_art;
    }
    cols_ = n_ + m_ + num_art;
    first_art_ = n_ + m_;
    tab_.assign(m_, std::vector<double>(cols_, 0.0));
    upper_.assign(cols_, kUnbounded);
    value_.assign(cols_, 0.0);
    basic_row_.assign(cols_, -1);
    basis_.assign(m_, 0);
    for (std::size_t j = 0; j < n_; ++j) upper_[j] = lp.bounds()[j].hi - lp.bounds()[j].lo;

    std::size_t art = first_art_;
    for (std::size_t r = 0; r < m_; ++r) {
      const double sign = shifted_rhs[r] < 0.0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) tab_[r][j] = sign * lp.rows()[r][j];
      tab_[r][n_ + r] = sign;
      std::size_t b = n_ + r;
      if (sign < 0.0) {
        b = art++;
        tab_[r][b] = 1.0;
      }
      basis_[r] = b;
      basic_row_[b] = static_cast<int>(r);
      value_[b] = sign * shifted_rhs[r];
    }
  }

  bool has_artificials() const { return first_art_ < cols_; }

  // Phase 1: maximize -(sum of artificials). Returns the residual infeasibility.
  double phase_one(int& pivots) {
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = first_art_; j < cols_; ++j) cost[j] = -1.0;
    run(cost, pivots);
    double residual = 0.0;
    for (std::size_t j = first_art_; j < cols_; ++j) residual += value_[j];
    // Artificials are pinned at zero for phase 2.
    for (std::size_t j = first_art_; j < cols_; ++j) upper_[j] = 0.0;
    return residual;
  }

  // Returns false if unbounded.
  bool phase_two(const std::vector<double>& objective, int& pivots) {
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = objective[j];
    return run(cost, pivots);
  }

  double value(std::size_t j) const { return value_[j]; }

 private:
  // Bland's rule primal simplex on the current basis.
  bool run(const std::vector<double>& cost, int& pivots) {
    for (int guard = 0; guard < 100000; ++guard) {
      // Entering: lowest index with an improving reduced cost.
      std::size_t enter = cols_;
      double dir = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (basic_row_[j] >= 0 || upper_[j] == 0.0) continue;
        double d = cost[j];
        for (std::size_t r = 0; r < m_; ++r) d -= cost[basis_[r]] * tab_[r][j];
        const bool at_upper = value_[j] > 0.0;
        if (!at_upper && d > kOptimalityTol) {
          enter = j;
          dir = 1.0;
          break;
        }
        if (at_upper && d < -kOptimalityTol) {
          enter = j;
          dir = -1.0;
          break;
        }
      }
      if (enter == cols_) return true;

      // Ratio test. Step t >= 0 moves the entering variable by dir * t.
      double best_t = upper_[enter];  // bound flip
      std::size_t leave_row = m_;
      bool leave_to_upper = false;
      for (std::size_t r = 0; r < m_; ++r) {
        const double alpha = tab_[r][enter] * dir;
        if (std::abs(alpha) <= kPivotTol) continue;
        const std::size_t b = basis_[r];
        double limit;
        bool to_upper;
        if (alpha > 0.0) {
          limit = std::max(value_[b], 0.0) / alpha;
          to_upper = false;
        } else {
          if (upper_[b] == kUnbounded) continue;
          limit = std::max(upper_[b] - value_[b], 0.0) / -alpha;
          to_upper = true;
        }
        if (limit < best_t || (limit == best_t && leave_row < m_ && b < basis_[leave_row])) {
          best_t = limit;
          leave_row = r;
          leave_to_upper = to_upper;
        }
      }
      if (best_t == kUnbounded) return false;

      for (std::size_t r = 0; r < m_; ++r) value_[basis_[r]] -= tab_[r][enter] * dir * best_t;
      value_[enter] += dir * best_t;

      if (leave_row == m_) {
        // Bound flip; snap to the exact bound.
        value_[enter] = dir > 0.0 ? upper_[enter] : 0.0;
        continue;
      }

      const std::size_t leave = basis_[leave_row];
      value_[leave] = leave_to_upper ? upper_[leave] : 0.0;
      pivot(leave_row, enter);
      basic_row_[leave] = -1;
      ++pivots;
    }
    throw SolverError("simplex iteration guard exceeded");
  }

  void pivot(std::size_t row, std::size_t col) {
    auto& pr = tab_[row];
    const double p = pr[col];
    for (double& v : pr) v /= p;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == row) continue;
      const double f = tab_[r][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) tab_[r][j] -= f * pr[j];
      tab_[r][col] = 0.0;
    }
    basis_[row] = col;
    basic_row_[col] = static_cast<int>(row);
  }

  std::size_t n_, m_, cols_ = 0, first_art_ = 0;
  std::vector<std::vector<double>> tab_;
  std::vector<double> upper_;
  std::vector<double> value_;
  std::vector<int> basic_row_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Solves the LP; the returned vertex is deterministic for a given input.
inline LpSolution solve_lp(const LinearProgram& lp) {
  LpSolution sol;
  detail::BoundedTableau tab(lp);
  if (tab.has_artificials() && tab.phase_one(sol.pivots) > kFeasibilityTol) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  if (!tab.phase_two(lp.objective(), sol.pivots)) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  sol.x.resize(lp.num_vars());
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const auto& bd = lp.bounds()[j];
    sol.x[j] = std::min(std::max(bd.lo + tab.value(j), bd.lo), bd.hi);
  }
  if (lp.max_violation(sol.x) > kFeasibilityTol) {
    sol.status = LpStatus::Infeasible;
    sol.x.clear();
    return sol;
  }
  sol.status = LpStatus::Optimal;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) sol.objective_value += lp.objective()[j] * sol.x[j];
  return sol;
}

}  // namespace semcom::lp
