#pragma once

// Linear-fractional relaxations of the per-(MD, BS, subchannel) sharing
// problem and their solution by Dinkelbach's parametric method.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semcom/core_model.hpp"
#include "semcom/errors.hpp"
#include "semcom/lp_simplex.hpp"

namespace semcom {

/// constant + coeffs . x
struct AffineForm {
  double constant = 0.0;
  std::vector<double> coeffs;

  double operator()(std::span<const double> x) const {
    double v = constant;
    for (std::size_t n = 0; n < coeffs.size(); ++n) v += coeffs[n] * x[n];
    return v;
  }
};

/// Partial assignment of the binary variables: -1 free, otherwise 0 or 1.
using Fixings = std::vector<std::int8_t>;
inline constexpr std::int8_t kFree = -1;

/// maximize X(x) / Y(x) over the polytope `region` (its objective is unused).
/// X is expressed in units of `numerator_scale` suts so that ratios are O(1);
/// multiply by numerator_scale to recover suts/s.
struct FractionalLp {
  AffineForm numerator;
  AffineForm denominator;
  lp::LinearProgram region;
  double numerator_scale = 1.0;
  // Binary variable index of every LP column, and the full (propagated)
  // fixings the node was built from.
  std::vector<int> binary_of_var;
  Fixings fixed;

  double ratio(std::span<const double> x) const { return numerator(x) / denominator(x); }
};

/// Binary variables of one (i, j) pair. Index p < |mis| is a_p, the mode
/// indicator of mismatched class p; b~_p = a_p b_p gets its own index only
/// when class p may be downloaded from the MBS. Otherwise b_p = 1 and b~_p is
/// tied to a_p.
struct SharingLayout {
  KnowledgeSplit split;
  std::vector<ClassId> mismatched;
  std::vector<int> btilde_index;  // -1 when tied to a_p
  Fixings forced;                 // fixings every node inherits

  int num_classes() const { return static_cast<int>(mismatched.size()); }
  int num_binaries() const { return static_cast<int>(forced.size()); }
  int num_forced() const {
    int n = 0;
    for (auto f : forced) n += f != kFree;
    return n;
  }
};

inline SharingLayout make_sharing_layout(const Scenario& s, int i, int j, bool allow_download,
                                         bool semantic_allowed = true) {
  SharingLayout layout;
  layout.split = knowledge_split(s, i, j);
  layout.mismatched = layout.split.mismatched();
  const int n = layout.num_classes();
  int next = n;
  layout.btilde_index.assign(static_cast<std::size_t>(n), -1);
  for (int p = 0; p < n; ++p)
    if (allow_download && layout.split.is_shared_at_mbs(layout.mismatched[static_cast<std::size_t>(p)]))
      layout.btilde_index[static_cast<std::size_t>(p)] = next++;
  layout.forced.assign(static_cast<std::size_t>(next), kFree);
  if (!semantic_allowed)
    for (int p = 0; p < n; ++p) layout.forced[static_cast<std::size_t>(p)] = 0;
  return layout;
}

/// Recovers (a, b) from a binary point; b_p is 1 whenever a_p = 0.
inline void decode_sharing(const SharingLayout& layout, std::span<const std::uint8_t> binaries,
                           BinaryVector& a, BinaryVector& b) {
  const auto n = static_cast<std::size_t>(layout.num_classes());
  a.assign(n, 0);
  b.assign(n, 1);
  for (std::size_t p = 0; p < n; ++p) {
    a[p] = binaries[p];
    const int bt = layout.btilde_index[p];
    if (a[p] && bt >= 0) b[p] = binaries[static_cast<std::size_t>(bt)];
  }
}

namespace detail {

// Propagates b~ <= a: b~ = 1 forces a = 1, a = 0 forces b~ = 0. Returns false
// on a contradiction.
inline bool propagate_coupling(const SharingLayout& layout, Fixings& fix) {
  for (int p = 0; p < layout.num_classes(); ++p) {
    const int bt = layout.btilde_index[static_cast<std::size_t>(p)];
    if (bt < 0) continue;
    auto& fa = fix[static_cast<std::size_t>(p)];
    auto& fb = fix[static_cast<std::size_t>(bt)];
    if (fb == 1) {
      if (fa == 0) return false;
      fa = 1;
    }
    if (fa == 0) fb = 0;
  }
  return true;
}

}  // namespace detail

/// Builds the relaxed subproblem at extraction ratio xi with the given
/// partial fixings. The forms reproduce the GESTR numerator, its air-time
/// denominator and the completion time exactly at binary points. Returns
/// nullopt for an infeasible node: contradictory fixings, or xi = 0 with a
/// semantic compute load (unbounded computing time).
inline std::optional<FractionalLp> build_fractional_lp(const Scenario& s, int i, int j, int k, double xi,
                                                       const SharingLayout& layout, const Fixings& fixings) {
  s.check_indices(i, j, k);
  if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("extraction ratio outside [0, 1]");
  if (fixings.size() != layout.forced.size()) throw ContractError("fixings do not match the layout");

  Fixings fix = layout.forced;
  for (std::size_t v = 0; v < fix.size(); ++v) {
    if (fixings[v] == kFree) continue;
    if (fix[v] != kFree && fix[v] != fixings[v]) return std::nullopt;
    fix[v] = fixings[v];
  }

  const int n = layout.num_classes();
  if (xi == 0.0) {
    if (!layout.split.matched.empty()) return std::nullopt;
    for (int p = 0; p < n; ++p) {
      if (fix[static_cast<std::size_t>(p)] == 1) return std::nullopt;
      fix[static_cast<std::size_t>(p)] = 0;
    }
  }
  if (!detail::propagate_coupling(layout, fix)) return std::nullopt;

  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  const auto& bs = s.base_stations[static_cast<std::size_t>(j)];
  const double rate = access_rate(s, i, j, k);
  const double rate0 = bs.is_macro() ? 0.0 : backhaul_rate(s, i, j, k);
  const double eps = s.accuracy(xi);
  const double omega = xi > 0.0 ? std::pow(xi, -s.rho) : 0.0;  // unused when xi = 0
  const double f = bs.compute_speed;

  double total_info = 0.0;
  for (const auto& c : md.classes) total_info += c.semantic_info;

  // Forms over the full binary vector; fixed entries are folded in below.
  const auto nb = fix.size();
  std::vector<double> x_coef(nb, 0.0), y_coef(nb, 0.0), t_coef(nb, 0.0);
  double x0 = 0.0, y0 = 0.0, t0 = 0.0;
  for (ClassId l : layout.split.matched) {
    const auto& c = md.profile(l);
    x0 += eps * c.semantic_info;
    y0 += xi * c.source_bits / rate;
    t0 += omega * c.compute_cycles / f;
  }
  for (int p = 0; p < n; ++p) {
    const auto& c = md.profile(layout.mismatched[static_cast<std::size_t>(p)]);
    const auto pa = static_cast<std::size_t>(p);
    const int bt = layout.btilde_index[pa];
    // Bit mode baseline: raw transmission and raw computing.
    x0 += c.semantic_info;
    y0 += c.source_bits / rate;
    t0 += c.compute_cycles / f;
    // Switching to semantic mode.
    x_coef[pa] += (eps - 1.0) * c.semantic_info;
    y_coef[pa] += (xi - 1.0) * c.source_bits / rate;
    t_coef[pa] += (omega - 1.0) * c.compute_cycles / f;
    if (bt < 0) {
      y_coef[pa] += c.knowledge_bits / rate;
    } else {
      // a - b~ downloaded over the backhaul, b~ uploaded by the MD.
      y_coef[pa] += c.knowledge_bits / rate0;
      y_coef[static_cast<std::size_t>(bt)] += c.knowledge_bits / rate - c.knowledge_bits / rate0;
    }
  }
  for (std::size_t v = 0; v < nb; ++v) t_coef[v] += y_coef[v];
  t0 += y0;

  FractionalLp fp;
  fp.numerator_scale = total_info;
  fp.numerator.constant = x0 / total_info;
  fp.denominator.constant = y0;
  double t_const = t0;
  std::vector<int> var_of(nb, -1);
  for (std::size_t v = 0; v < nb; ++v) {
    if (fix[v] == kFree) {
      var_of[v] = static_cast<int>(fp.binary_of_var.size());
      fp.binary_of_var.push_back(static_cast<int>(v));
      fp.numerator.coeffs.push_back(x_coef[v] / total_info);
      fp.denominator.coeffs.push_back(y_coef[v]);
    } else if (fix[v] == 1) {
      fp.numerator.constant += x_coef[v] / total_info;
      fp.denominator.constant += y_coef[v];
      t_const += t_coef[v];
    }
  }

  const std::size_t nv = fp.binary_of_var.size();
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<double> delay(nv, 0.0);
  for (std::size_t c = 0; c < nv; ++c) delay[c] = t_coef[static_cast<std::size_t>(fp.binary_of_var[c])];
  rows.push_back(std::move(delay));
  rhs.push_back(md.delay_tolerance - t_const);
  // Coupling b~ - a <= 0 where both are free (otherwise settled by propagation).
  for (int p = 0; p < n; ++p) {
    const int bt = layout.btilde_index[static_cast<std::size_t>(p)];
    if (bt < 0) continue;
    const int va = var_of[static_cast<std::size_t>(p)];
    const int vb = var_of[static_cast<std::size_t>(bt)];
    if (va < 0 || vb < 0) continue;
    std::vector<double> row(nv, 0.0);
    row[static_cast<std::size_t>(vb)] = 1.0;
    row[static_cast<std::size_t>(va)] = -1.0;
    rows.push_back(std::move(row));
    rhs.push_back(0.0);
  }
  fp.region = lp::LinearProgram(std::vector<double>(nv, 0.0), std::move(rows), std::move(rhs),
                                std::vector<lp::Bounds>(nv, lp::Bounds{0.0, 1.0}));
  fp.fixed = std::move(fix);
  return fp;
}

struct DinkelbachResult {
  lp::LpStatus status = lp::LpStatus::Infeasible;
  double eta_star = 0.0;
  std::vector<double> x_star;
  int iterations = 0;  // LP solves
  bool converged = false;
  double final_gap = 0.0;           // F(eta) = max X - eta Y at the last eta
  std::vector<double> eta_history;  // eta used by each LP solve, starting at 0
  int lp_pivots = 0;
};

inline constexpr double kDefaultFpTolerance = 1e-9;
inline constexpr int kDinkelbachIterationCap = 50;

/// maximize X / Y over fp.region, assuming Y > 0 there. The first LP's
/// phase 1 doubles as the feasibility check, so an infeasible region costs a
/// single LP solve.
inline DinkelbachResult dinkelbach_solve(const FractionalLp& fp, double tolerance = kDefaultFpTolerance,
                                         int max_iterations = kDinkelbachIterationCap) {
  DinkelbachResult res;
  lp::LinearProgram problem = fp.region;
  const std::size_t nv = problem.num_vars();
  double eta = 0.0;
  for (int q = 0; q < max_iterations; ++q) {
    std::vector<double> c(nv);
    for (std::size_t v = 0; v < nv; ++v) c[v] = fp.numerator.coeffs[v] - eta * fp.denominator.coeffs[v];
    problem.set_objective(std::move(c));
    const auto sol = lp::solve_lp(problem);
    res.lp_pivots += sol.pivots;
    res.iterations = q + 1;
    res.eta_history.push_back(eta);
    if (sol.status != lp::LpStatus::Optimal) {
      if (q == 0) {
        res.status = sol.status;
        return res;
      }
      throw SolverError("Dinkelbach: LP became " + lp::to_string(sol.status) + " after iteration 0");
    }
    const double x = fp.numerator(sol.x);
    const double y = fp.denominator(sol.x);
    if (!(y > 0.0)) throw SolverError("Dinkelbach: non-positive denominator on the feasible region");
    const double gap = x - eta * y;
    if (gap <= tolerance) {
      res.status = lp::LpStatus::Optimal;
      res.converged = true;
      res.final_gap = gap;
      res.eta_star = x / y;
      res.x_star = sol.x;
      return res;
    }
    eta = x / y;
  }
  throw SolverError("Dinkelbach: no convergence within " + std::to_string(max_iterations) + " iterations");
}

}  // namespace semcom
