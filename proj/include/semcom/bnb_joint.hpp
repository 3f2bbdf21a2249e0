#pragma once

// Joint per-(MD, BS, subchannel) optimization: a grid search over the
// extraction ratio, and for each grid value a depth-first branch and bound
// over the binary sharing decisions whose node relaxations are solved by
// Dinkelbach's method.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "semcom/core_model.hpp"
#include "semcom/fp_dinkelbach.hpp"
#include "semcom/joint_types.hpp"

namespace semcom {

struct BnbOptions {
  bool prune = true;
  double fp_tolerance = kDefaultFpTolerance;
  // A node is discarded only when its bound is below the incumbent by more
  // than this (relative) margin, so near-ties are always explored.
  double prune_tolerance = 1e-7;
  double integrality_tolerance = 1e-9;
  std::function<void(const FractionalLp&, const DinkelbachResult&)> on_relaxation;
};

struct BnbStats {
  long nodes_explored = 0;
  long nodes_pruned = 0;
  long nodes_infeasible = 0;
  long fp_iterations = 0;
  long lp_pivots = 0;
  double root_bound = -kInfinity;  // -inf when the root is infeasible
  bool root_integral = false;
};

struct BnbResult {
  bool feasible = false;
  std::vector<std::uint8_t> x;  // full binary vector
  double value = -kInfinity;    // ratio in FractionalLp units
  BnbStats stats;
};

struct BnbNode {
  Fixings fixed_assignments;
  double relaxation_bound = kInfinity;  // parent's bound until solved
  int depth = 0;
};

/// Depth-first branch and bound maximizing a linear-fractional objective over
/// binary points. `build` maps a node's fixings to its relaxation (nullopt
/// for an infeasible node). Branching picks the relaxed variable farthest
/// from {0, 1}, lowest index first, and explores the 1-branch first.
///
/// With options.prune = false no bound is used at all: every feasible
/// subtree is expanded down to fully fixed leaves.
template <typename Builder>
BnbResult branch_and_bound(Builder&& build, int num_binaries, const BnbOptions& options = {}) {
  BnbResult result;
  auto& st = result.stats;
  std::vector<BnbNode> stack;
  stack.push_back(BnbNode{Fixings(static_cast<std::size_t>(num_binaries), kFree), kInfinity, 0});

  while (!stack.empty()) {
    BnbNode node = std::move(stack.back());
    stack.pop_back();
    const bool is_root = st.nodes_explored == 0;
    ++st.nodes_explored;

    const std::optional<FractionalLp> fp = build(node.fixed_assignments);
    if (!fp) {
      ++st.nodes_infeasible;
      continue;
    }
    const DinkelbachResult rel = dinkelbach_solve(*fp, options.fp_tolerance);
    st.fp_iterations += rel.iterations;
    st.lp_pivots += rel.lp_pivots;
    if (options.on_relaxation) options.on_relaxation(*fp, rel);
    if (rel.status != lp::LpStatus::Optimal) {
      ++st.nodes_infeasible;
      continue;
    }
    node.relaxation_bound = rel.eta_star;
    if (is_root) st.root_bound = rel.eta_star;

    if (options.prune && result.feasible &&
        rel.eta_star < result.value - options.prune_tolerance * std::max(1.0, std::abs(result.value))) {
      ++st.nodes_pruned;
      continue;
    }

    const std::size_t nv = fp->binary_of_var.size();
    std::size_t branch_var = nv;
    double farthest = options.integrality_tolerance;
    for (std::size_t v = 0; v < nv; ++v) {
      const double d = std::min(rel.x_star[v], 1.0 - rel.x_star[v]);
      if (d > farthest) {
        farthest = d;
        branch_var = v;
      }
    }
    if (branch_var == nv && is_root) st.root_integral = true;

    if (branch_var == nv && (options.prune || nv == 0)) {
      // Integral relaxation: its vertex is the best binary point of the subtree.
      std::vector<double> xr(nv);
      for (std::size_t v = 0; v < nv; ++v) xr[v] = rel.x_star[v] > 0.5 ? 1.0 : 0.0;
      if (fp->region.max_violation(xr) > 0.0) {
        ++st.nodes_infeasible;
        continue;
      }
      const double value = fp->ratio(xr);
      if (!result.feasible || value > result.value) {
        result.feasible = true;
        result.value = value;
        result.x.assign(static_cast<std::size_t>(num_binaries), 0);
        for (std::size_t b = 0; b < fp->fixed.size(); ++b)
          if (fp->fixed[b] == 1) result.x[b] = 1;
        for (std::size_t v = 0; v < nv; ++v)
          result.x[static_cast<std::size_t>(fp->binary_of_var[v])] = static_cast<std::uint8_t>(xr[v]);
      }
      continue;
    }
    if (branch_var == nv) branch_var = 0;  // enumeration mode: split the first free variable

    const auto b = static_cast<std::size_t>(fp->binary_of_var[branch_var]);
    BnbNode zero{fp->fixed, rel.eta_star, node.depth + 1};
    BnbNode one{fp->fixed, rel.eta_star, node.depth + 1};
    zero.fixed_assignments[b] = 0;
    one.fixed_assignments[b] = 1;
    stack.push_back(std::move(zero));
    stack.push_back(std::move(one));
  }
  return result;
}

struct JointStats {
  long bnb_runs = 0;
  long nodes_explored = 0;
  long nodes_pruned = 0;
  long fp_iterations = 0;
  long lp_pivots = 0;
};

struct JointOptions {
  int grid_m = 50;
  SolverMode mode = SolverMode::Joint;
  BnbOptions bnb;
  std::function<void(const BnbResult&)> on_bnb;
};

/// Sharing layout for one (i, j) under a solver mode.
inline SharingLayout make_mode_layout(const Scenario& s, int i, int j, SolverMode mode) {
  return make_sharing_layout(s, i, j, mode != SolverMode::NoCollaboration,
                             mode != SolverMode::NoKnowledgeSharing);
}

/// Best (a, b, xi) for MD i served by BS j on subchannel k. An unattainable
/// accuracy threshold or an empty feasible set yields feasible = false.
inline JointDecision solve_joint(const Scenario& s, int i, int j, int k, const JointOptions& options,
                                 JointStats* stats = nullptr) {
  s.check_indices(i, j, k);
  if (options.grid_m < 1) throw ContractError("grid size M must be >= 1");
  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  JointDecision best;
  const auto xi_th = min_extraction_ratio(s.accuracy, md.accuracy_threshold);
  if (!xi_th) return best;

  const SharingLayout layout = make_mode_layout(s, i, j, options.mode);
  const auto grid = extraction_grid(*xi_th, options.grid_m);
  BinaryVector a, b;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double xi = grid[m];
    const auto res = branch_and_bound(
        [&](const Fixings& fix) { return build_fractional_lp(s, i, j, k, xi, layout, fix); },
        layout.num_binaries(), options.bnb);
    if (options.on_bnb) options.on_bnb(res);
    if (stats) {
      ++stats->bnb_runs;
      stats->nodes_explored += res.stats.nodes_explored;
      stats->nodes_pruned += res.stats.nodes_pruned;
      stats->fp_iterations += res.stats.fp_iterations;
      stats->lp_pivots += res.stats.lp_pivots;
    }
    if (!res.feasible) continue;
    decode_sharing(layout, res.x, a, b);
    const auto t = timing(s, i, j, k, a, b, xi);
    if (!(t.t_total <= md.delay_tolerance)) continue;
    const double gamma = gestr(s, i, j, k, a, b, xi);
    if (!best.feasible || gamma > best.gamma) {
      best.feasible = true;
      best.a = a;
      best.b = b;
      best.xi = xi;
      best.xi_index = static_cast<int>(m);
      best.gamma = gamma;
      best.timing = t;
    }
  }
  return best;
}

inline JointDecision solve_joint(const Scenario& s, int i, int j, int k, int grid_m, SolverMode mode) {
  JointOptions options;
  options.grid_m = grid_m;
  options.mode = mode;
  return solve_joint(s, i, j, k, options);
}

}  // namespace semcom
