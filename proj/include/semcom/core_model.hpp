#pragma once

// Two-tier semantic-bit network model: rates, task timing, semantic
// accuracy and the generalized effective semantic transmission rate (GESTR).
//
// Units are strict SI throughout: bits, seconds, Hz, Watts, CPU cycles and
// suts (semantic units).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semcom/errors.hpp"

namespace semcom {

using ClassId = int;
using BinaryVector = std::vector<std::uint8_t>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& p, const Point2& q) {
  return std::hypot(p.x - q.x, p.y - q.y);
}

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

struct RadioParams {
  double bandwidth_hz = 6e6;      // W, per subchannel
  double noise_power_w = 1e-15;   // sigma^2
  int num_subchannels = 5;        // K

  void validate() const {
    if (!(bandwidth_hz > 0.0)) throw ConfigError("radio: bandwidth W must be > 0");
    if (!(noise_power_w > 0.0)) throw ConfigError("radio: noise power sigma2 must be > 0");
    if (num_subchannels < 1) throw ConfigError("radio: K must be >= 1");
  }
};

/// A base station; id 0 is the MBS, 1..J are SBSs.
struct BaseStation {
  int id = 0;
  Point2 position;
  double compute_speed = 2e9;                  // f_j^C, cycles/s
  std::optional<double> backhaul_tx_power_w;  // p_{0,j}^T, MBS only
  std::vector<ClassId> kb_classes;             // sorted

  bool is_macro() const { return id == 0; }
  bool stores(ClassId l) const {
    return std::binary_search(kb_classes.begin(), kb_classes.end(), l);
  }
};

/// Per-class task data of one MD.
struct ClassProfile {
  ClassId id = 0;
  double source_bits = 0.0;     // d^T
  double knowledge_bits = 0.0;  // d^K
  double semantic_info = 0.0;   // I, suts
  double compute_cycles = 0.0;  // c
};

struct MobileDevice {
  int id = 0;
  Point2 position;
  double tx_power_w = 0.1;
  std::vector<ClassProfile> classes;  // the required classes, sorted by id
  double accuracy_threshold = 0.75;   // eps_th
  double delay_tolerance = 3.0;       // t_max, seconds

  const ClassProfile& profile(ClassId l) const {
    auto it = std::lower_bound(classes.begin(), classes.end(), l,
                               [](const ClassProfile& c, ClassId v) { return c.id < v; });
    if (it == classes.end() || it->id != l)
      throw IndexError("MD " + std::to_string(id) + " does not require class " + std::to_string(l));
    return *it;
  }
};

/// Linear power gains. access[i][j][k] covers every BS; backhaul[i][j-1][k]
/// is the MBS -> SBS j link used for MD i on subchannel k.
struct ChannelGains {
  std::vector<std::vector<std::vector<double>>> access;
  std::vector<std::vector<std::vector<double>>> backhaul;
};

enum class SignConvention { Normalized, Literal };

/// eps(xi) = -t1 * exp(t2 (1 - xi)) + t3 * exp(-t4 (1 - xi)), reported
/// clamped to [0, 1].
///
/// With the Normalized convention the magnitudes of the supplied parameters
/// are stored, and the curve must be strictly increasing on [0, 1]. The
/// Literal convention keeps the signs as given and skips that validation; it
/// exists to audit published parameter sets and cannot be used for
/// extraction-ratio inversion.
class AccuracyModel {
 public:
  static constexpr std::array<double, 4> kReferenceTheta{6.205e-8, 16.45, 0.9228, 0.06917};
  static constexpr int kValidationGridPoints = 1000;

  AccuracyModel() : AccuracyModel(kReferenceTheta) {}

  explicit AccuracyModel(std::array<double, 4> theta,
                         SignConvention convention = SignConvention::Normalized)
      : convention_(convention), theta_(theta) {
    if (convention_ == SignConvention::Normalized) {
      for (double& t : theta_) t = std::abs(t);
      for (int n = 0; n + 1 < kValidationGridPoints; ++n) {
        double x0 = static_cast<double>(n) / (kValidationGridPoints - 1);
        double x1 = static_cast<double>(n + 1) / (kValidationGridPoints - 1);
        // Constant curves (t1 = t4 = 0) are allowed.
        if (raw(x1) < raw(x0))
          throw ConfigError("accuracy model is not increasing on [0, 1]");
      }
    }
  }

  const std::array<double, 4>& theta() const { return theta_; }
  SignConvention convention() const { return convention_; }
  bool is_monotone() const { return convention_ == SignConvention::Normalized; }

  /// Pre-clamp value of the fitted curve.
  double raw(double xi) const {
    double r = 1.0 - xi;
    return -theta_[0] * std::exp(theta_[1] * r) + theta_[2] * std::exp(-theta_[3] * r);
  }

  double operator()(double xi) const {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("extraction ratio outside [0, 1]");
    return std::clamp(raw(xi), 0.0, 1.0);
  }

 private:
  SignConvention convention_;
  std::array<double, 4> theta_;
};

inline double accuracy(const AccuracyModel& model, double xi) { return model(xi); }

/// Smallest xi in [0, 1] with eps(xi) >= eps_th, or nullopt when even xi = 1
/// falls short. Bisection keeps the upper end of the bracket, so the returned
/// ratio always satisfies the threshold; it runs to floating-point resolution.
inline std::optional<double> min_extraction_ratio(const AccuracyModel& model, double eps_th) {
  if (!model.is_monotone())
    throw ContractError("extraction-ratio inversion requires a monotone accuracy model");
  if (model(1.0) < eps_th) return std::nullopt;
  if (model(0.0) >= eps_th) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (model(mid) >= eps_th)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// The M + 1 grid values xi_th + m (1 - xi_th) / M, m = 0..M; the last one is
/// exactly 1.
inline std::vector<double> extraction_grid(double xi_th, int grid_m) {
  if (grid_m < 1) throw ContractError("grid size M must be >= 1");
  std::vector<double> grid(static_cast<std::size_t>(grid_m) + 1);
  double step = (1.0 - xi_th) / grid_m;
  for (int m = 0; m < grid_m; ++m) grid[static_cast<std::size_t>(m)] = xi_th + m * step;
  grid.back() = 1.0;
  return grid;
}

struct Scenario {
  RadioParams radio;
  std::vector<BaseStation> base_stations;  // index == id
  std::vector<MobileDevice> mobile_devices;
  ChannelGains gains;
  AccuracyModel accuracy;
  double rho = 1.0;  // omega = xi^-rho

  int num_mds() const { return static_cast<int>(mobile_devices.size()); }
  int num_bs() const { return static_cast<int>(base_stations.size()); }
  int num_subchannels() const { return radio.num_subchannels; }

  void check_indices(int i, int j, int k) const {
    if (i < 0 || i >= num_mds()) throw IndexError("MD index " + std::to_string(i) + " out of range");
    if (j < 0 || j >= num_bs()) throw IndexError("BS index " + std::to_string(j) + " out of range");
    if (k < 0 || k >= num_subchannels())
      throw IndexError("subchannel index " + std::to_string(k) + " out of range");
  }

  void validate() const {
    radio.validate();
    if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
    if (base_stations.empty() || base_stations.front().id != 0)
      throw ConfigError("scenario needs exactly one MBS with id 0 listed first");
    for (std::size_t j = 0; j < base_stations.size(); ++j) {
      const auto& bs = base_stations[j];
      if (bs.id != static_cast<int>(j)) throw ConfigError("base station ids must be 0..J in order");
      if (!(bs.compute_speed > 0.0)) throw ConfigError("BS compute speed must be > 0");
      if (bs.is_macro() != bs.backhaul_tx_power_w.has_value())
        throw ConfigError("backhaul power must be given for the MBS only");
      if (bs.backhaul_tx_power_w && !(*bs.backhaul_tx_power_w > 0.0))
        throw ConfigError("backhaul power must be > 0");
      if (!std::is_sorted(bs.kb_classes.begin(), bs.kb_classes.end()) ||
          std::adjacent_find(bs.kb_classes.begin(), bs.kb_classes.end()) != bs.kb_classes.end())
        throw ConfigError("BS knowledge classes must be sorted and unique");
    }
    for (const auto& md : mobile_devices) {
      if (!(md.tx_power_w > 0.0)) throw ConfigError("MD transmit power must be > 0");
      if (!(md.accuracy_threshold > 0.0 && md.accuracy_threshold < 1.0))
        throw ConfigError("MD accuracy threshold must lie in (0, 1)");
      if (!(md.delay_tolerance > 0.0)) throw ConfigError("MD delay tolerance must be > 0");
      if (md.classes.empty()) throw ConfigError("MD must require at least one knowledge class");
      for (std::size_t n = 0; n < md.classes.size(); ++n) {
        const auto& c = md.classes[n];
        if (n > 0 && md.classes[n - 1].id >= c.id)
          throw ConfigError("MD classes must be sorted and unique");
        if (!(c.source_bits > 0 && c.knowledge_bits > 0 && c.semantic_info > 0 && c.compute_cycles > 0))
          throw ConfigError("per-class MD quantities must be > 0");
      }
    }
    const auto I = static_cast<std::size_t>(num_mds());
    const auto J1 = static_cast<std::size_t>(num_bs());
    const auto K = static_cast<std::size_t>(num_subchannels());
    if (gains.access.size() != I || gains.backhaul.size() != I)
      throw ConfigError("gain tables must have one entry per MD");
    for (std::size_t i = 0; i < I; ++i) {
      if (gains.access[i].size() != J1 || gains.backhaul[i].size() != J1 - 1)
        throw ConfigError("gain tables have the wrong number of base stations");
      for (const auto* table : {&gains.access[i], &gains.backhaul[i]})
        for (const auto& row : *table) {
          if (row.size() != K) throw ConfigError("gain tables have the wrong number of subchannels");
          for (double g : row)
            if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("channel gains must be finite and > 0");
        }
    }
  }
};

/// Partition of an MD's required classes with respect to a BS:
///   matched        classes already stored at BS j
///   shared_at_mbs  mismatched at j but stored at the MBS (SBS only)
///   upload_only    mismatched classes only the MD can provide
struct KnowledgeSplit {
  std::vector<ClassId> matched;
  std::vector<ClassId> shared_at_mbs;
  std::vector<ClassId> upload_only;

  /// All mismatched classes in ascending id order; decision vectors a and b
  /// are indexed by position in this list.
  std::vector<ClassId> mismatched() const {
    std::vector<ClassId> out;
    out.reserve(shared_at_mbs.size() + upload_only.size());
    std::merge(shared_at_mbs.begin(), shared_at_mbs.end(), upload_only.begin(), upload_only.end(),
               std::back_inserter(out));
    return out;
  }

  bool is_shared_at_mbs(ClassId l) const {
    return std::binary_search(shared_at_mbs.begin(), shared_at_mbs.end(), l);
  }
};

inline KnowledgeSplit knowledge_split(const Scenario& s, int i, int j) {
  s.check_indices(i, j, 0);
  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  const auto& bs = s.base_stations[static_cast<std::size_t>(j)];
  const auto& mbs = s.base_stations.front();
  KnowledgeSplit split;
  for (const auto& c : md.classes) {
    if (bs.stores(c.id))
      split.matched.push_back(c.id);
    else if (!bs.is_macro() && mbs.stores(c.id))
      split.shared_at_mbs.push_back(c.id);
    else
      split.upload_only.push_back(c.id);
  }
  return split;
}

inline double shannon_rate(double bandwidth, double power, double gain, double noise) {
  return bandwidth * std::log2(1.0 + power * gain / noise);
}

/// R_{i,j,k}: MD i -> BS j on subchannel k.
inline double access_rate(const Scenario& s, int i, int j, int k) {
  s.check_indices(i, j, k);
  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  double g = s.gains.access[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
  return shannon_rate(s.radio.bandwidth_hz, md.tx_power_w, g, s.radio.noise_power_w);
}

/// R^{0->j}_{i,k}: MBS -> SBS j backhaul while SBS j serves MD i on k.
inline double backhaul_rate(const Scenario& s, int i, int j, int k) {
  s.check_indices(i, j, k);
  if (j == 0) throw ContractError("backhaul rate is defined for SBSs only (j != 0)");
  const auto& mbs = s.base_stations.front();
  double g = s.gains.backhaul[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k)];
  return shannon_rate(s.radio.bandwidth_hz, *mbs.backhaul_tx_power_w, g, s.radio.noise_power_w);
}

struct TimingBreakdown {
  double t_up = 0.0;
  double t_down = 0.0;
  double t_K = 0.0;  // knowledge sharing
  double t_S = 0.0;  // semantic transmission
  double t_B = 0.0;  // bit transmission
  double t_R = 0.0;  // semantic computing
  double t_E = 0.0;  // source computing
  double t_total = 0.0;

  double air_time() const { return t_K + t_S + t_B; }
};

/// Task completion time components for MD i on BS j, subchannel k.
///
/// a and b are indexed like KnowledgeSplit::mismatched(). b must be 1 for
/// every upload-only class and for every class when j == 0. xi = 0 with a
/// nonempty semantic compute load yields t_R = +inf.
inline TimingBreakdown timing(const Scenario& s, int i, int j, int k, std::span<const std::uint8_t> a,
                              std::span<const std::uint8_t> b, double xi) {
  s.check_indices(i, j, k);
  if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("extraction ratio outside [0, 1]");
  const auto split = knowledge_split(s, i, j);
  const auto mis = split.mismatched();
  if (a.size() != mis.size() || b.size() != mis.size())
    throw ContractError("decision vectors must cover the mismatched classes");

  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  const auto& bs = s.base_stations[static_cast<std::size_t>(j)];
  const double rate = access_rate(s, i, j, k);
  const double rate0 = bs.is_macro() ? 0.0 : backhaul_rate(s, i, j, k);

  double up_bits = 0.0, down_bits = 0.0, semantic_bits = 0.0, raw_bits = 0.0;
  double semantic_cycles = 0.0, raw_cycles = 0.0;
  for (ClassId l : split.matched) {
    const auto& c = md.profile(l);
    semantic_bits += c.source_bits;
    semantic_cycles += c.compute_cycles;
  }
  for (std::size_t p = 0; p < mis.size(); ++p) {
    const auto& c = md.profile(mis[p]);
    const bool shared = split.is_shared_at_mbs(mis[p]);
    if (a[p] > 1 || b[p] > 1) throw ContractError("decision vectors must be binary");
    if (!shared && b[p] != 1)
      throw ContractError("upload-only classes (and every class at the MBS) require b = 1");
    if (a[p]) {
      if (b[p])
        up_bits += c.knowledge_bits;
      else
        down_bits += c.knowledge_bits;
      semantic_bits += c.source_bits;
      semantic_cycles += c.compute_cycles;
    } else {
      raw_bits += c.source_bits;
      raw_cycles += c.compute_cycles;
    }
  }

  TimingBreakdown t;
  t.t_up = up_bits / rate;
  t.t_down = down_bits > 0.0 ? down_bits / rate0 : 0.0;
  t.t_K = t.t_up + t.t_down;
  t.t_S = xi * semantic_bits / rate;
  t.t_B = raw_bits / rate;
  if (semantic_cycles > 0.0)
    t.t_R = (xi > 0.0 ? std::pow(xi, -s.rho) : kInfinity) * semantic_cycles / bs.compute_speed;
  t.t_E = raw_cycles / bs.compute_speed;
  t.t_total = t.t_K + t.t_S + t.t_B + t.t_R + t.t_E;
  return t;
}

/// Accuracy-weighted semantic information plus bit-delivered information.
inline double effective_information(const Scenario& s, int i, int j, std::span<const std::uint8_t> a,
                                    double xi) {
  const auto split = knowledge_split(s, i, j);
  const auto mis = split.mismatched();
  if (a.size() != mis.size()) throw ContractError("decision vector must cover the mismatched classes");
  const auto& md = s.mobile_devices[static_cast<std::size_t>(i)];
  double semantic = 0.0, raw = 0.0;
  for (ClassId l : split.matched) semantic += md.profile(l).semantic_info;
  for (std::size_t p = 0; p < mis.size(); ++p)
    (a[p] ? semantic : raw) += md.profile(mis[p]).semantic_info;
  return s.accuracy(xi) * semantic + raw;
}

/// GESTR gamma_{i,j,k} in suts/s.
inline double gestr(const Scenario& s, int i, int j, int k, std::span<const std::uint8_t> a,
                    std::span<const std::uint8_t> b, double xi) {
  const auto t = timing(s, i, j, k, a, b, xi);
  const double air = t.air_time();
  if (!(air > 0.0)) throw DegenerateInstanceError("GESTR undefined: no payload is transmitted");
  return effective_information(s, i, j, a, xi) / air;
}

}  // namespace semcom
