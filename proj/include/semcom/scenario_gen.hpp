#pragma once

// Random scenario generation.
//
// Draws come from boost::random::mt19937_64 with Boost's distributions, whose
// output is identical on every platform (unlike the std:: distributions).
// Draw order for one scenario:
//   1. MBS knowledge base, then each SBS knowledge base (j = 1..J)
//   2. per MD: position (radius, angle), required classes, then per required
//      class in ascending id order I, d_K, d_T, c; then eps_th, t_max
//   3. access fading rho^2 for every (i, j, k), i-major
//   4. backhaul fading for every (i, j >= 1, k), i-major
// Swept overrides (t_max, eps_th, powers, bandwidth) are applied after
// generation, so they never shift the draws of anything else.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "semcom/core_model.hpp"

namespace semcom {

using Rng = boost::random::mt19937_64;

/// SplitMix64 finalizer; derives independent seeds from (base, stream index).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream));
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  static Range scalar(double v) { return {v, v}; }
  bool is_scalar() const { return lo == hi; }
  double draw(Rng& rng) const {
    if (is_scalar()) return lo;
    return boost::random::uniform_real_distribution<double>(lo, hi)(rng);
  }
};

/// Defaults reproduce the reference setup: one SBS of radius 150 m at the
/// origin under an MBS at (-150, 0), 3 MDs, 5 subchannels, 10 classes.
struct GenerationConfig {
  std::uint64_t seed = 1;
  int num_mds = 3;
  int num_sbs = 1;
  int num_subchannels = 5;
  int num_classes = 10;
  int mbs_kb_size = 6;
  int sbs_kb_size = 5;
  int md_required_size = 6;

  double sbs_radius = 150.0;
  Point2 mbs_position{-150.0, 0.0};

  double bandwidth_hz = 6e6;
  double noise_power_w = 1e-15;  // -120 dBm
  double md_tx_power_w = 0.1;
  double backhaul_tx_power_w = 20.0;
  double mbs_compute_speed = 4e9;
  double sbs_compute_speed = 2e9;
  double rho = 1.0;
  std::array<double, 4> theta = AccuracyModel::kReferenceTheta;
  SignConvention theta_convention = SignConvention::Normalized;

  Range semantic_info{2e6, 20e6};    // I, suts
  Range knowledge_bits{5e6, 50e6};   // d_K
  Range source_bits{20e6, 100e6};    // d_T
  Range compute_cycles{1e6, 100e6};  // c
  Range accuracy_threshold{0.70, 0.85};
  Range delay_tolerance{2.5, 3.5};

  double path_loss_constant = 1e-3;  // g = const * rho^2 * d^-2
  double min_distance = 1.0;

  void validate() const {
    if (num_mds < 1 || num_sbs < 0 || num_subchannels < 1 || num_classes < 1)
      throw ConfigError("generation: counts must be positive (num_sbs >= 0)");
    for (int sz : {mbs_kb_size, sbs_kb_size, md_required_size})
      if (sz < 0 || sz > num_classes) throw ConfigError("generation: knowledge-base sizes must lie in [0, num_classes]");
    if (md_required_size < 1) throw ConfigError("generation: MDs must require at least one class");
    if (!(sbs_radius > 0.0)) throw ConfigError("generation: sbs_radius must be > 0");
    for (const Range* r : {&semantic_info, &knowledge_bits, &source_bits, &compute_cycles, &accuracy_threshold,
                           &delay_tolerance})
      if (!(r->lo <= r->hi)) throw ConfigError("generation: range lo > hi");
    if (!(semantic_info.lo > 0 && knowledge_bits.lo > 0 && source_bits.lo > 0 && compute_cycles.lo > 0 &&
          delay_tolerance.lo > 0))
      throw ConfigError("generation: per-class quantities and t_max must be > 0");
    if (!(accuracy_threshold.lo > 0.0 && accuracy_threshold.hi < 1.0))
      throw ConfigError("generation: eps_th range must lie in (0, 1)");
    if (!(bandwidth_hz > 0 && noise_power_w > 0 && md_tx_power_w > 0 && backhaul_tx_power_w > 0 &&
          mbs_compute_speed > 0 && sbs_compute_speed > 0 && rho > 0 && path_loss_constant > 0 &&
          min_distance > 0))
      throw ConfigError("generation: physical parameters must be > 0");
  }
};

/// Uniform over the disk area: r = R sqrt(U).
inline Point2 sample_disk_point(Rng& rng, double radius, Point2 center = {}) {
  boost::random::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  return {center.x + r * std::cos(phi), center.y + r * std::sin(phi)};
}

/// rho^2 for Rayleigh fading: exponential with unit mean.
inline double sample_fading_power(Rng& rng) { return boost::random::exponential_distribution<double>(1.0)(rng); }

/// `count` distinct classes out of [0, num_classes), sorted (partial
/// Fisher-Yates).
inline std::vector<ClassId> sample_classes(Rng& rng, int num_classes, int count) {
  std::vector<ClassId> pool(static_cast<std::size_t>(num_classes));
  std::iota(pool.begin(), pool.end(), 0);
  for (int n = 0; n < count; ++n) {
    boost::random::uniform_int_distribution<int> pick(n, num_classes - 1);
    std::swap(pool[static_cast<std::size_t>(n)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

inline double link_gain(double path_loss_constant, double fading, double dist, double min_distance) {
  const double d = std::max(dist, min_distance);
  return path_loss_constant * fading / (d * d);
}

/// SBS j (1-based) positions: the origin for a single SBS, otherwise evenly
/// spaced on a ring of radius sbs_radius / 2. MDs are always drawn over the
/// disk of radius sbs_radius around the origin.
inline Point2 sbs_position(const GenerationConfig& cfg, int j) {
  if (cfg.num_sbs == 1) return {};
  const double phi = 2.0 * std::numbers::pi * (j - 1) / cfg.num_sbs;
  return {0.5 * cfg.sbs_radius * std::cos(phi), 0.5 * cfg.sbs_radius * std::sin(phi)};
}

inline Scenario generate(const GenerationConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  Scenario s;
  s.radio = RadioParams{cfg.bandwidth_hz, cfg.noise_power_w, cfg.num_subchannels};
  s.accuracy = AccuracyModel(cfg.theta, cfg.theta_convention);
  s.rho = cfg.rho;

  BaseStation mbs;
  mbs.id = 0;
  mbs.position = cfg.mbs_position;
  mbs.compute_speed = cfg.mbs_compute_speed;
  mbs.backhaul_tx_power_w = cfg.backhaul_tx_power_w;
  mbs.kb_classes = sample_classes(rng, cfg.num_classes, cfg.mbs_kb_size);
  s.base_stations.push_back(mbs);
  for (int j = 1; j <= cfg.num_sbs; ++j) {
    BaseStation sbs;
    sbs.id = j;
    sbs.position = sbs_position(cfg, j);
    sbs.compute_speed = cfg.sbs_compute_speed;
    sbs.kb_classes = sample_classes(rng, cfg.num_classes, cfg.sbs_kb_size);
    s.base_stations.push_back(sbs);
  }

  for (int i = 0; i < cfg.num_mds; ++i) {
    MobileDevice md;
    md.id = i;
    md.position = sample_disk_point(rng, cfg.sbs_radius);
    md.tx_power_w = cfg.md_tx_power_w;
    for (ClassId l : sample_classes(rng, cfg.num_classes, cfg.md_required_size)) {
      ClassProfile c;
      c.id = l;
      c.semantic_info = cfg.semantic_info.draw(rng);
      c.knowledge_bits = cfg.knowledge_bits.draw(rng);
      c.source_bits = cfg.source_bits.draw(rng);
      c.compute_cycles = cfg.compute_cycles.draw(rng);
      md.classes.push_back(c);
    }
    md.accuracy_threshold = cfg.accuracy_threshold.draw(rng);
    md.delay_tolerance = cfg.delay_tolerance.draw(rng);
    s.mobile_devices.push_back(std::move(md));
  }

  const auto I = static_cast<std::size_t>(cfg.num_mds);
  const auto J1 = s.base_stations.size();
  const auto K = static_cast<std::size_t>(cfg.num_subchannels);
  s.gains.access.assign(I, std::vector<std::vector<double>>(J1, std::vector<double>(K)));
  s.gains.backhaul.assign(I, std::vector<std::vector<double>>(J1 - 1, std::vector<double>(K)));
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t j = 0; j < J1; ++j) {
      const double d = distance(s.mobile_devices[i].position, s.base_stations[j].position);
      for (std::size_t k = 0; k < K; ++k)
        s.gains.access[i][j][k] = link_gain(cfg.path_loss_constant, sample_fading_power(rng), d, cfg.min_distance);
    }
  // Backhaul: MBS -> SBS distance, same fading law.
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t j = 1; j < J1; ++j) {
      const double d = distance(s.base_stations[0].position, s.base_stations[j].position);
      for (std::size_t k = 0; k < K; ++k)
        s.gains.backhaul[i][j - 1][k] = link_gain(cfg.path_loss_constant, sample_fading_power(rng), d, cfg.min_distance);
    }
  s.validate();
  return s;
}

}  // namespace semcom
