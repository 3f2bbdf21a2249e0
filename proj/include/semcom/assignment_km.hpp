#pragma once

// Maximum-weight MD <-> subchannel matching (Kuhn-Munkres) where every MD
// and every subchannel is used at most once and MDs may stay unmatched.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "semcom/core_model.hpp"
#include "semcom/joint_types.hpp"

namespace semcom {

using JointTable = std::map<std::tuple<int, int, int>, JointDecision>;

struct AssignmentProblem {
  // weights[i][k]; nullopt marks a forbidden pair (no feasible BS).
  std::vector<std::vector<std::optional<double>>> weights;
  std::vector<std::vector<int>> best_bs;

  int num_mds() const { return static_cast<int>(weights.size()); }
  int num_subchannels() const { return weights.empty() ? 0 : static_cast<int>(weights.front().size()); }
};

struct AssignedTriple {
  int md = 0;
  int bs = 0;
  int subchannel = 0;
  double gamma = 0.0;

  friend bool operator==(const AssignedTriple&, const AssignedTriple&) = default;
};

struct Assignment {
  std::vector<AssignedTriple> delta;  // ordered by MD
  double total = 0.0;
};

/// w[i][k] = max over BSs j with a feasible decision of gamma*_{i,j,k}; the
/// lowest j wins ties.
inline AssignmentProblem build_assignment_problem(const Scenario& s, const JointTable& joint_solutions) {
  AssignmentProblem prob;
  const int I = s.num_mds(), J1 = s.num_bs(), K = s.num_subchannels();
  prob.weights.assign(static_cast<std::size_t>(I), std::vector<std::optional<double>>(static_cast<std::size_t>(K)));
  prob.best_bs.assign(static_cast<std::size_t>(I), std::vector<int>(static_cast<std::size_t>(K), -1));
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < J1; ++j) {
        auto it = joint_solutions.find({i, j, k});
        if (it == joint_solutions.end())
          throw ContractError("joint solutions missing entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ", " + std::to_string(k) + ")");
        const auto& d = it->second;
        auto& w = prob.weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        if (d.feasible && (!w || d.gamma > *w)) {
          w = d.gamma;
          prob.best_bs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = j;
        }
      }
  return prob;
}

namespace detail {

// Min-cost perfect matching on a square matrix (potentials + shortest
// augmenting paths, O(n^3)). +inf entries are unusable edges; a perfect
// matching over finite entries must exist. Returns row -> column.
inline std::vector<int> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int row = 1; row <= n; ++row) {
    p[0] = row;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double c = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)];
        if (c != inf) {
          const double cur = c - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
          if (cur < minv[static_cast<std::size_t>(j)]) {
            minv[static_cast<std::size_t>(j)] = cur;
            way[static_cast<std::size_t>(j)] = j0;
          }
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      if (j1 == 0) throw SolverError("assignment: no perfect matching over finite entries");
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return match;
}

}  // namespace detail

/// Maximizes the total selected weight. The weight matrix is padded to
/// (I + K) x (I + K): each MD gets a zero-weight "unmatched" column and each
/// subchannel a zero-weight "unused" row, so partial matchings are perfect
/// matchings of the padded problem. Forbidden pairs are excluded edges.
inline Assignment solve_assignment(const AssignmentProblem& problem) {
  const int I = problem.num_mds(), K = problem.num_subchannels();
  Assignment out;
  if (I == 0 || K == 0) return out;
  const int n = I + K;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < I; ++i)
    for (int k = 0; k < K; ++k) {
      const auto& w = problem.weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = w ? -*w : inf;
    }
  const auto match = detail::hungarian_min_cost(cost);

  std::vector<int> md_to_k(static_cast<std::size_t>(I), -1);
  std::vector<char> k_used(static_cast<std::size_t>(K), 0);
  for (int i = 0; i < I; ++i) {
    const int k = match[static_cast<std::size_t>(i)];
    if (k < K && problem.weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) {
      md_to_k[static_cast<std::size_t>(i)] = k;
      k_used[static_cast<std::size_t>(k)] = 1;
    }
  }
  // Prefer a real zero-weight edge over leaving an MD unmatched.
  for (int i = 0; i < I; ++i) {
    if (md_to_k[static_cast<std::size_t>(i)] >= 0) continue;
    for (int k = 0; k < K; ++k) {
      const auto& w = problem.weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (!k_used[static_cast<std::size_t>(k)] && w && *w == 0.0) {
        md_to_k[static_cast<std::size_t>(i)] = k;
        k_used[static_cast<std::size_t>(k)] = 1;
        break;
      }
    }
  }
  for (int i = 0; i < I; ++i) {
    const int k = md_to_k[static_cast<std::size_t>(i)];
    if (k < 0) continue;
    const double w = *problem.weights[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    out.delta.push_back({i, problem.best_bs[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], k, w});
    out.total += w;
  }
  return out;
}

}  // namespace semcom
