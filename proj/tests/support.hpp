#pragma once

// Test-side oracles and instance builders. Nothing here calls into the
// solver code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "semcom/semcom.hpp"

namespace semcom::testing {

using TestRng = boost::random::mt19937_64;

inline double uniform(TestRng& rng, double lo, double hi) {
  return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(TestRng& rng, int lo, int hi) {
  return boost::random::uniform_int_distribution<int>(lo, hi)(rng);
}

/// W log2(1 + p g / sigma2), computed in long double.
inline double rate_oracle(long double w, long double p, long double g, long double noise) {
  return static_cast<double>(w * std::log2(1.0L + p * g / noise));
}

/// One MBS, optional SBS, one MD, one subchannel. Gains are chosen so that
/// the access rate equals `rate` and the backhaul rate equals `rate0`.
struct TinySpec {
  std::vector<ClassProfile> classes;
  std::vector<ClassId> mbs_kb;
  std::vector<ClassId> sbs_kb;
  bool with_sbs = true;
  double rate = 1e8;
  double rate0 = 2e8;
  double f_mbs = 4e9;
  double f_sbs = 2e9;
  double eps_th = 0.75;
  double t_max = 3.0;
};

inline Scenario tiny_scenario(const TinySpec& spec) {
  Scenario s;
  s.radio = RadioParams{1e6, 1e-15, 1};
  const double p = 0.1, p0 = 20.0;
  auto gain_for = [&](double rate, double power) {
    return (std::exp2(rate / s.radio.bandwidth_hz) - 1.0) * s.radio.noise_power_w / power;
  };
  BaseStation mbs;
  mbs.id = 0;
  mbs.compute_speed = spec.f_mbs;
  mbs.backhaul_tx_power_w = p0;
  mbs.kb_classes = spec.mbs_kb;
  s.base_stations.push_back(mbs);
  if (spec.with_sbs) {
    BaseStation sbs;
    sbs.id = 1;
    sbs.compute_speed = spec.f_sbs;
    sbs.kb_classes = spec.sbs_kb;
    s.base_stations.push_back(sbs);
  }
  MobileDevice md;
  md.tx_power_w = p;
  md.classes = spec.classes;
  md.accuracy_threshold = spec.eps_th;
  md.delay_tolerance = spec.t_max;
  s.mobile_devices.push_back(md);
  const std::size_t J1 = s.base_stations.size();
  s.gains.access.assign(1, std::vector<std::vector<double>>(J1, std::vector<double>{gain_for(spec.rate, p)}));
  s.gains.backhaul.assign(1, std::vector<std::vector<double>>(J1 - 1, std::vector<double>{gain_for(spec.rate0, p0)}));
  s.validate();
  return s;
}

/// Default-configuration scenario for a seed.
inline Scenario default_scenario(std::uint64_t seed, int num_sbs = 1) {
  GenerationConfig cfg;
  cfg.seed = seed;
  cfg.num_sbs = num_sbs;
  return generate(cfg);
}

struct Instance {
  Scenario scenario;
  int i = 0, j = 0, k = 0;
  std::uint64_t seed = 0;
};

/// Deterministic stream of (scenario, i, j, k) with at most `max_mis`
/// mismatched classes, drawn from default-configuration scenarios. SBS pairs
/// come first within each scenario so that MBS-shared classes are well
/// represented.
inline std::vector<Instance> oracle_instances(int count, int max_mis = 3, std::uint64_t base_seed = 9001) {
  std::vector<Instance> out;
  for (std::uint64_t seed = base_seed; static_cast<int>(out.size()) < count; ++seed) {
    GenerationConfig cfg;
    cfg.seed = seed;
    cfg.md_required_size = 5;
    const Scenario s = generate(cfg);
    for (int i = 0; i < s.num_mds() && static_cast<int>(out.size()) < count; ++i)
      for (int j = s.num_bs() - 1; j >= 0 && static_cast<int>(out.size()) < count; --j) {
        if (static_cast<int>(knowledge_split(s, i, j).mismatched().size()) > max_mis) continue;
        const int k = static_cast<int>((seed + static_cast<std::uint64_t>(i)) % static_cast<std::uint64_t>(s.num_subchannels()));
        out.push_back({s, i, j, k, seed});
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// LP oracle: vertex enumeration for small problems.

struct VertexResult {
  lp::LpStatus status = lp::LpStatus::Infeasible;
  double value = 0.0;
};

namespace detail {

// Solves A x = b (n <= 3) by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-10) return std::nullopt;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t q = c; q < n; ++q) a[r][q] -= f * a[c][q];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = 0; r < n; ++r) x[r] = b[r] / a[r][r];
  return x;
}

// Best vertex with infinite upper bounds replaced by `box`.
inline std::optional<double> best_vertex(const lp::LinearProgram& lp, double box) {
  const std::size_t n = lp.num_vars();
  std::vector<std::vector<double>> rows = lp.rows();
  std::vector<double> rhs = lp.rhs();
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> up(n, 0.0), down(n, 0.0);
    up[v] = 1.0;
    down[v] = -1.0;
    const double hi = std::isfinite(lp.bounds()[v].hi) ? lp.bounds()[v].hi : box;
    rows.push_back(up);
    rhs.push_back(hi);
    rows.push_back(down);
    rhs.push_back(-lp.bounds()[v].lo);
  }
  const std::size_t m = rows.size();
  std::optional<double> best;
  // All n-subsets of the m constraints.
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(n), true);
  do {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (std::size_t r = 0; r < m; ++r)
      if (mask[r]) {
        a.push_back(rows[r]);
        b.push_back(rhs[r]);
      }
    const auto x = solve_square(a, b);
    if (!x) continue;
    bool ok = true;
    for (std::size_t r = 0; r < m && ok; ++r) {
      double lhs = 0.0;
      for (std::size_t v = 0; v < n; ++v) lhs += rows[r][v] * (*x)[v];
      ok = lhs <= rhs[r] + 1e-7 * std::max(1.0, std::abs(rhs[r]));
    }
    if (!ok) continue;
    double val = 0.0;
    for (std::size_t v = 0; v < n; ++v) val += lp.objective()[v] * (*x)[v];
    if (!best || val > *best) best = val;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

}  // namespace detail

/// Optimum by vertex enumeration. Unboundedness is detected by growing the
/// artificial box on infinite upper bounds: a bounded LP keeps its value.
inline VertexResult vertex_oracle(const lp::LinearProgram& lp) {
  const auto v1 = detail::best_vertex(lp, 1e4);
  if (!v1) return {lp::LpStatus::Infeasible, 0.0};
  const auto v2 = detail::best_vertex(lp, 2e4);
  if (*v2 > *v1 + 1e-6 * std::max(1.0, std::abs(*v1))) return {lp::LpStatus::Unbounded, 0.0};
  return {lp::LpStatus::Optimal, *v1};
}

/// Random LP with 1..3 variables; some upper bounds infinite.
inline lp::LinearProgram random_lp(TestRng& rng) {
  const int n = uniform_int(rng, 1, 3);
  const int m = uniform_int(rng, 0, 4);
  auto coef = [&] { return static_cast<double>(uniform_int(rng, -6, 6)) + (uniform_int(rng, 0, 3) == 0 ? uniform(rng, -0.5, 0.5) : 0.0); };
  std::vector<double> c(static_cast<std::size_t>(n));
  for (auto& v : c) v = coef();
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> rhs(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    for (auto& v : rows[static_cast<std::size_t>(r)]) v = coef();
    rhs[static_cast<std::size_t>(r)] = static_cast<double>(uniform_int(rng, -4, 12));
  }
  std::vector<lp::Bounds> bounds(static_cast<std::size_t>(n));
  for (auto& b : bounds) {
    b.lo = static_cast<double>(uniform_int(rng, -2, 1));
    b.hi = uniform_int(rng, 0, 4) == 0 ? lp::kUnbounded : b.lo + static_cast<double>(uniform_int(rng, 0, 5));
  }
  return lp::LinearProgram(c, rows, rhs, bounds);
}

// ---------------------------------------------------------------------------
// Assignment oracle: exhaustive search over partial injective MD -> subchannel
// maps.

namespace detail {

inline void assign_rec(const AssignmentProblem& p, std::size_t i, std::vector<bool>& used, double acc,
                       double& best) {
  if (i == p.weights.size()) {
    best = std::max(best, acc);
    return;
  }
  assign_rec(p, i + 1, used, acc, best);  // MD i unmatched
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (used[k] || !p.weights[i][k]) continue;
    used[k] = true;
    assign_rec(p, i + 1, used, acc + *p.weights[i][k], best);
    used[k] = false;
  }
}

}  // namespace detail

inline double assignment_oracle(const AssignmentProblem& p) {
  double best = 0.0;
  std::vector<bool> used(static_cast<std::size_t>(p.num_subchannels()), false);
  detail::assign_rec(p, 0, used, 0.0, best);
  return best;
}

/// Random problem built from a JointTable over (I, J + 1, K) with some
/// infeasible entries; weights are integers so totals compare exactly.
inline AssignmentProblem random_assignment_problem(TestRng& rng, int num_mds, int num_sbs, int num_subchannels,
                                                   Scenario* scenario_out = nullptr) {
  Scenario s;
  s.radio.num_subchannels = num_subchannels;
  s.mobile_devices.resize(static_cast<std::size_t>(num_mds));
  s.base_stations.resize(static_cast<std::size_t>(num_sbs + 1));
  for (int j = 0; j <= num_sbs; ++j) s.base_stations[static_cast<std::size_t>(j)].id = j;
  JointTable table;
  for (int i = 0; i < num_mds; ++i)
    for (int j = 0; j <= num_sbs; ++j)
      for (int k = 0; k < num_subchannels; ++k) {
        JointDecision d;
        if (uniform_int(rng, 0, 3) != 0) {
          d.feasible = true;
          d.gamma = static_cast<double>(uniform_int(rng, 1, 60)) * 1e6;
        }
        table[{i, j, k}] = d;
      }
  if (scenario_out) *scenario_out = s;
  return build_assignment_problem(s, table);
}

}  // namespace semcom::testing
