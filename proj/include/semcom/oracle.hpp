#pragma once

// Exhaustive reference for the per-(i, j, k) subproblem. Only the closed-form
// model is used here (no LP, no Dinkelbach, no branch and bound).

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "semcom/core_model.hpp"
#include "semcom/joint_types.hpp"

namespace semcom {

struct OracleReport {
  JointDecision best;
  long evaluated_points = 0;
  long feasible_points = 0;
  // Best gamma among feasible points whose (a, xi index) differs from the
  // winner's; -inf if there is none.
  double runner_up_gamma = -kInfinity;
};

inline constexpr int kOracleMaxBinaries = 20;

/// Number of lattice points brute_force_joint visits when xi_th exists.
inline long oracle_lattice_size(const KnowledgeSplit& split, int grid_m, SolverMode mode) {
  const auto n_mis = split.shared_at_mbs.size() + split.upload_only.size();
  const std::size_t n_a = mode == SolverMode::NoKnowledgeSharing ? 0 : n_mis;
  const std::size_t n_b = mode == SolverMode::Joint && n_a > 0 ? split.shared_at_mbs.size() : 0;
  return static_cast<long>(grid_m + 1) * (1L << n_a) * (1L << n_b);
}

inline OracleReport brute_force_joint(const Scenario& s, int i, int j, int k, int grid_m, SolverMode mode) {
  s.check_indices(i, j, k);
  const auto split = knowledge_split(s, i, j);
  const auto mis = split.mismatched();
  const std::size_t n = mis.size();
  if (2 * n > static_cast<std::size_t>(kOracleMaxBinaries))
    throw ContractError("brute_force_joint: " + std::to_string(2 * n) + " binaries exceed the enumeration guard of " +
                        std::to_string(kOracleMaxBinaries));

  OracleReport report;
  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  const auto xi_th = min_extraction_ratio(s.accuracy, md.accuracy_threshold);
  if (!xi_th) return report;
  const auto grid = extraction_grid(*xi_th, grid_m);

  // Positions of classes whose sharing manner is a free choice.
  std::vector<std::size_t> free_b;
  if (mode == SolverMode::Joint)
    for (std::size_t p = 0; p < n; ++p)
      if (split.is_shared_at_mbs(mis[p])) free_b.push_back(p);
  const std::uint32_t a_count = mode == SolverMode::NoKnowledgeSharing ? 1u : (1u << n);
  const std::uint32_t b_count = a_count > 1 ? (1u << free_b.size()) : 1u;

  std::map<std::pair<std::uint32_t, std::size_t>, double> best_per_key;
  std::uint32_t best_mask = 0;
  BinaryVector a(n), b(n);
  for (std::size_t m = 0; m < grid.size(); ++m) {
    const double xi = grid[m];
    for (std::uint32_t am = 0; am < a_count; ++am) {
      for (std::uint32_t bm = 0; bm < b_count; ++bm) {
        ++report.evaluated_points;
        for (std::size_t p = 0; p < n; ++p) {
          a[p] = static_cast<std::uint8_t>((am >> p) & 1u);
          b[p] = 1;
        }
        for (std::size_t q = 0; q < free_b.size(); ++q) b[free_b[q]] = static_cast<std::uint8_t>((bm >> q) & 1u);

        const auto t = timing(s, i, j, k, a, b, xi);
        if (!(t.t_total <= md.delay_tolerance)) continue;
        if (!(s.accuracy(xi) >= md.accuracy_threshold)) continue;
        if (!(t.air_time() > 0.0)) continue;
        ++report.feasible_points;
        const double gamma = gestr(s, i, j, k, a, b, xi);

        auto [it, inserted] = best_per_key.try_emplace({am, m}, gamma);
        if (!inserted && gamma > it->second) it->second = gamma;

        if (!report.best.feasible || gamma > report.best.gamma) {
          auto& d = report.best;
          d.feasible = true;
          d.a = a;
          d.b = b;
          for (std::size_t p = 0; p < n; ++p)
            if (!a[p]) d.b[p] = 1;
          d.xi = xi;
          d.xi_index = static_cast<int>(m);
          d.gamma = gamma;
          d.timing = t;
          best_mask = am;
        }
      }
    }
  }
  if (report.best.feasible)
    for (const auto& [key, g] : best_per_key)
      if (key != std::make_pair(best_mask, static_cast<std::size_t>(report.best.xi_index)) &&
          g > report.runner_up_gamma)
        report.runner_up_gamma = g;
  return report;
}

}  // namespace semcom
