#pragma once

// YAML text format for scenarios and generation configs.
//
// Keys mirror the model symbols (W, sigma2, K, f_C, p_T, p_T_0j, I, d_K, d_T,
// c, eps_th, t_max, rho). Every quantity is SI except powers, which are
// strings with an explicit unit: "0.1 W", "100 mW" or "-120 dBm".
// Requires yaml-cpp.

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "semcom/core_model.hpp"
#include "semcom/scenario_gen.hpp"
#include "semcom/text_format.hpp"

namespace semcom::io {

/// Parses "<number> <unit>" with unit W, mW or dBm into Watts.
inline double parse_power(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("power '" + text + "': expected '<number> W|mW|dBm'");
  }
  std::string unit = text.substr(pos);
  unit.erase(0, unit.find_first_not_of(" \t"));
  unit.erase(unit.find_last_not_of(" \t") + 1);
  if (unit == "W") return value;
  if (unit == "mW") return value * 1e-3;
  if (unit == "dBm") return dbm_to_watts(value);
  throw ConfigError("power '" + text + "': missing or unknown unit (use W, mW or dBm)");
}

inline std::string format_power(double watts) { return format_double(watts) + " W"; }

namespace detail {

inline void require_map(const YAML::Node& node, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
}

inline void reject_unknown(const YAML::Node& node, const std::set<std::string>& known, const std::string& where) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
  const auto child = node[key];
  if (!child) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return child.as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void get_opt(const YAML::Node& node, const std::string& key, T& out, const std::string& where) {
  if (node[key]) out = get<T>(node, key, where);
}

inline Point2 get_point(const YAML::Node& node, const std::string& key, const std::string& where) {
  const auto v = get<std::vector<double>>(node, key, where);
  if (v.size() != 2) throw ConfigError(where + "." + key + ": expected [x, y]");
  return {v[0], v[1]};
}

inline double get_power(const YAML::Node& node, const std::string& key, const std::string& where) {
  return parse_power(get<std::string>(node, key, where));
}

inline Range get_range(const YAML::Node& node, const std::string& key, const std::string& where) {
  const auto child = node[key];
  if (child.IsScalar()) return Range::scalar(get<double>(node, key, where));
  const auto v = get<std::vector<double>>(node, key, where);
  if (v.size() != 2) throw ConfigError(where + "." + key + ": expected a scalar or [lo, hi]");
  return {v[0], v[1]};
}

inline std::array<double, 4> get_theta(const YAML::Node& node, const std::string& key, const std::string& where) {
  const auto v = get<std::vector<double>>(node, key, where);
  if (v.size() != 4) throw ConfigError(where + "." + key + ": expected four parameters");
  return {v[0], v[1], v[2], v[3]};
}

inline SignConvention parse_convention(const std::string& s) {
  if (s == "normalized") return SignConvention::Normalized;
  if (s == "literal") return SignConvention::Literal;
  throw ConfigError("sign_convention must be 'normalized' or 'literal'");
}

inline std::string to_string(SignConvention c) { return c == SignConvention::Normalized ? "normalized" : "literal"; }

inline YAML::Emitter& emit_number(YAML::Emitter& out, double v) { return out << format_double(v); }

template <typename Seq>
void emit_numbers(YAML::Emitter& out, const Seq& values) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double v : values) emit_number(out, v);
  out << YAML::EndSeq;
}

inline YAML::Node load_yaml(const std::string& text, const std::string& where) {
  try {
    return YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// GenerationConfig

inline GenerationConfig config_from_yaml(const YAML::Node& node) {
  using namespace detail;
  const std::string w = "generation config";
  GenerationConfig cfg;
  if (!node || node.IsNull()) return cfg;
  require_map(node, w);
  reject_unknown(node,
                 {"seed", "num_mds", "num_sbs", "K", "num_classes", "mbs_kb_size", "sbs_kb_size", "md_required_size",
                  "sbs_radius", "mbs_position", "W", "sigma2", "p_T", "p_T_0j", "f_C", "rho", "theta",
                  "theta_convention", "I", "d_K", "d_T", "c", "eps_th", "t_max", "path_loss_constant",
                  "min_distance"},
                 w);
  get_opt(node, "seed", cfg.seed, w);
  get_opt(node, "num_mds", cfg.num_mds, w);
  get_opt(node, "num_sbs", cfg.num_sbs, w);
  get_opt(node, "K", cfg.num_subchannels, w);
  get_opt(node, "num_classes", cfg.num_classes, w);
  get_opt(node, "mbs_kb_size", cfg.mbs_kb_size, w);
  get_opt(node, "sbs_kb_size", cfg.sbs_kb_size, w);
  get_opt(node, "md_required_size", cfg.md_required_size, w);
  get_opt(node, "sbs_radius", cfg.sbs_radius, w);
  if (node["mbs_position"]) cfg.mbs_position = get_point(node, "mbs_position", w);
  get_opt(node, "W", cfg.bandwidth_hz, w);
  if (node["sigma2"]) cfg.noise_power_w = get_power(node, "sigma2", w);
  if (node["p_T"]) cfg.md_tx_power_w = get_power(node, "p_T", w);
  if (node["p_T_0j"]) cfg.backhaul_tx_power_w = get_power(node, "p_T_0j", w);
  if (node["f_C"]) {
    const auto f = get<std::vector<double>>(node, "f_C", w);
    if (f.size() != 2) throw ConfigError(w + ".f_C: expected [MBS, SBS]");
    cfg.mbs_compute_speed = f[0];
    cfg.sbs_compute_speed = f[1];
  }
  get_opt(node, "rho", cfg.rho, w);
  if (node["theta"]) cfg.theta = get_theta(node, "theta", w);
  if (node["theta_convention"]) cfg.theta_convention = parse_convention(get<std::string>(node, "theta_convention", w));
  if (node["I"]) cfg.semantic_info = get_range(node, "I", w);
  if (node["d_K"]) cfg.knowledge_bits = get_range(node, "d_K", w);
  if (node["d_T"]) cfg.source_bits = get_range(node, "d_T", w);
  if (node["c"]) cfg.compute_cycles = get_range(node, "c", w);
  if (node["eps_th"]) cfg.accuracy_threshold = get_range(node, "eps_th", w);
  if (node["t_max"]) cfg.delay_tolerance = get_range(node, "t_max", w);
  get_opt(node, "path_loss_constant", cfg.path_loss_constant, w);
  get_opt(node, "min_distance", cfg.min_distance, w);
  cfg.validate();
  return cfg;
}

inline GenerationConfig parse_config(const std::string& text) {
  return config_from_yaml(detail::load_yaml(text, "generation config"));
}

inline GenerationConfig load_config(const std::string& path) { return parse_config(detail::read_file(path)); }

inline void emit_config(YAML::Emitter& out, const GenerationConfig& cfg) {
  using detail::emit_number;
  auto range = [&](const char* key, const Range& r) {
    out << YAML::Key << key << YAML::Value;
    if (r.is_scalar())
      emit_number(out, r.lo);
    else
      detail::emit_numbers(out, std::array<double, 2>{r.lo, r.hi});
  };
  out << YAML::BeginMap;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "num_mds" << YAML::Value << cfg.num_mds;
  out << YAML::Key << "num_sbs" << YAML::Value << cfg.num_sbs;
  out << YAML::Key << "K" << YAML::Value << cfg.num_subchannels;
  out << YAML::Key << "num_classes" << YAML::Value << cfg.num_classes;
  out << YAML::Key << "mbs_kb_size" << YAML::Value << cfg.mbs_kb_size;
  out << YAML::Key << "sbs_kb_size" << YAML::Value << cfg.sbs_kb_size;
  out << YAML::Key << "md_required_size" << YAML::Value << cfg.md_required_size;
  out << YAML::Key << "sbs_radius" << YAML::Value;
  emit_number(out, cfg.sbs_radius);
  out << YAML::Key << "mbs_position" << YAML::Value;
  detail::emit_numbers(out, std::array<double, 2>{cfg.mbs_position.x, cfg.mbs_position.y});
  out << YAML::Key << "W" << YAML::Value;
  emit_number(out, cfg.bandwidth_hz);
  out << YAML::Key << "sigma2" << YAML::Value << format_power(cfg.noise_power_w);
  out << YAML::Key << "p_T" << YAML::Value << format_power(cfg.md_tx_power_w);
  out << YAML::Key << "p_T_0j" << YAML::Value << format_power(cfg.backhaul_tx_power_w);
  out << YAML::Key << "f_C" << YAML::Value;
  detail::emit_numbers(out, std::array<double, 2>{cfg.mbs_compute_speed, cfg.sbs_compute_speed});
  out << YAML::Key << "rho" << YAML::Value;
  emit_number(out, cfg.rho);
  out << YAML::Key << "theta" << YAML::Value;
  detail::emit_numbers(out, cfg.theta);
  out << YAML::Key << "theta_convention" << YAML::Value << detail::to_string(cfg.theta_convention);
  range("I", cfg.semantic_info);
  range("d_K", cfg.knowledge_bits);
  range("d_T", cfg.source_bits);
  range("c", cfg.compute_cycles);
  range("eps_th", cfg.accuracy_threshold);
  range("t_max", cfg.delay_tolerance);
  out << YAML::Key << "path_loss_constant" << YAML::Value;
  emit_number(out, cfg.path_loss_constant);
  out << YAML::Key << "min_distance" << YAML::Value;
  emit_number(out, cfg.min_distance);
  out << YAML::EndMap;
}

// ---------------------------------------------------------------------------
// Scenario

inline Scenario scenario_from_yaml(const YAML::Node& node) {
  using namespace detail;
  const std::string w = "scenario";
  require_map(node, w);
  reject_unknown(node, {"radio", "rho", "accuracy", "base_stations", "mobile_devices", "gains"}, w);
  Scenario s;

  const auto radio = node["radio"];
  require_map(radio, "scenario.radio");
  reject_unknown(radio, {"W", "sigma2", "K"}, "scenario.radio");
  s.radio.bandwidth_hz = get<double>(radio, "W", "scenario.radio");
  s.radio.noise_power_w = get_power(radio, "sigma2", "scenario.radio");
  s.radio.num_subchannels = get<int>(radio, "K", "scenario.radio");
  s.rho = get<double>(node, "rho", w);

  const auto acc = node["accuracy"];
  require_map(acc, "scenario.accuracy");
  reject_unknown(acc, {"theta", "sign_convention"}, "scenario.accuracy");
  SignConvention conv = SignConvention::Normalized;
  if (acc["sign_convention"]) conv = parse_convention(get<std::string>(acc, "sign_convention", "scenario.accuracy"));
  s.accuracy = AccuracyModel(get_theta(acc, "theta", "scenario.accuracy"), conv);

  const auto bss = node["base_stations"];
  if (!bss.IsSequence()) throw ConfigError("scenario.base_stations: expected a sequence");
  for (const auto& b : bss) {
    const std::string wb = "scenario.base_stations[]";
    require_map(b, wb);
    reject_unknown(b, {"id", "position", "f_C", "p_T_0j", "kb"}, wb);
    BaseStation bs;
    bs.id = get<int>(b, "id", wb);
    bs.position = get_point(b, "position", wb);
    bs.compute_speed = get<double>(b, "f_C", wb);
    if (b["p_T_0j"]) bs.backhaul_tx_power_w = get_power(b, "p_T_0j", wb);
    bs.kb_classes = get<std::vector<int>>(b, "kb", wb);
    s.base_stations.push_back(std::move(bs));
  }

  const auto mds = node["mobile_devices"];
  if (!mds.IsSequence()) throw ConfigError("scenario.mobile_devices: expected a sequence");
  for (const auto& m : mds) {
    const std::string wm = "scenario.mobile_devices[]";
    require_map(m, wm);
    reject_unknown(m, {"id", "position", "p_T", "eps_th", "t_max", "classes"}, wm);
    MobileDevice md;
    md.id = get<int>(m, "id", wm);
    md.position = get_point(m, "position", wm);
    md.tx_power_w = get_power(m, "p_T", wm);
    md.accuracy_threshold = get<double>(m, "eps_th", wm);
    md.delay_tolerance = get<double>(m, "t_max", wm);
    const auto classes = m["classes"];
    if (!classes.IsSequence()) throw ConfigError(wm + ".classes: expected a sequence");
    for (const auto& c : classes) {
      const std::string wc = wm + ".classes[]";
      require_map(c, wc);
      reject_unknown(c, {"l", "I", "d_K", "d_T", "c"}, wc);
      ClassProfile p;
      p.id = get<int>(c, "l", wc);
      p.semantic_info = get<double>(c, "I", wc);
      p.knowledge_bits = get<double>(c, "d_K", wc);
      p.source_bits = get<double>(c, "d_T", wc);
      p.compute_cycles = get<double>(c, "c", wc);
      md.classes.push_back(p);
    }
    s.mobile_devices.push_back(std::move(md));
  }

  const auto gains = node["gains"];
  require_map(gains, "scenario.gains");
  reject_unknown(gains, {"access", "backhaul"}, "scenario.gains");
  using Table = std::vector<std::vector<std::vector<double>>>;
  s.gains.access = get<Table>(gains, "access", "scenario.gains");
  s.gains.backhaul = get<Table>(gains, "backhaul", "scenario.gains");
  s.validate();
  return s;
}

inline Scenario parse_scenario(const std::string& text) {
  return scenario_from_yaml(detail::load_yaml(text, "scenario"));
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(detail::read_file(path)); }

inline void emit_scenario(YAML::Emitter& out, const Scenario& s) {
  using detail::emit_number;
  using detail::emit_numbers;
  out << YAML::BeginMap;
  out << YAML::Key << "radio" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "W" << YAML::Value;
  emit_number(out, s.radio.bandwidth_hz);
  out << YAML::Key << "sigma2" << YAML::Value << format_power(s.radio.noise_power_w);
  out << YAML::Key << "K" << YAML::Value << s.radio.num_subchannels;
  out << YAML::EndMap;
  out << YAML::Key << "rho" << YAML::Value;
  emit_number(out, s.rho);
  out << YAML::Key << "accuracy" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "theta" << YAML::Value;
  emit_numbers(out, s.accuracy.theta());
  out << YAML::Key << "sign_convention" << YAML::Value << detail::to_string(s.accuracy.convention());
  out << YAML::EndMap;

  out << YAML::Key << "base_stations" << YAML::Value << YAML::BeginSeq;
  for (const auto& bs : s.base_stations) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << bs.id;
    out << YAML::Key << "position" << YAML::Value;
    emit_numbers(out, std::array<double, 2>{bs.position.x, bs.position.y});
    out << YAML::Key << "f_C" << YAML::Value;
    emit_number(out, bs.compute_speed);
    if (bs.backhaul_tx_power_w) out << YAML::Key << "p_T_0j" << YAML::Value << format_power(*bs.backhaul_tx_power_w);
    out << YAML::Key << "kb" << YAML::Value << YAML::Flow << bs.kb_classes;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "mobile_devices" << YAML::Value << YAML::BeginSeq;
  for (const auto& md : s.mobile_devices) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << md.id;
    out << YAML::Key << "position" << YAML::Value;
    emit_numbers(out, std::array<double, 2>{md.position.x, md.position.y});
    out << YAML::Key << "p_T" << YAML::Value << format_power(md.tx_power_w);
    out << YAML::Key << "eps_th" << YAML::Value;
    emit_number(out, md.accuracy_threshold);
    out << YAML::Key << "t_max" << YAML::Value;
    emit_number(out, md.delay_tolerance);
    out << YAML::Key << "classes" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : md.classes) {
      out << YAML::Flow << YAML::BeginMap;
      out << YAML::Key << "l" << YAML::Value << c.id;
      out << YAML::Key << "I" << YAML::Value;
      emit_number(out, c.semantic_info);
      out << YAML::Key << "d_K" << YAML::Value;
      emit_number(out, c.knowledge_bits);
      out << YAML::Key << "d_T" << YAML::Value;
      emit_number(out, c.source_bits);
      out << YAML::Key << "c" << YAML::Value;
      emit_number(out, c.compute_cycles);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  auto table = [&](const char* key, const std::vector<std::vector<std::vector<double>>>& t) {
    out << YAML::Key << key << YAML::Value << YAML::BeginSeq;
    for (const auto& per_md : t) {
      out << YAML::Flow << YAML::BeginSeq;
      for (const auto& row : per_md) emit_numbers(out, row);
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  };
  out << YAML::Key << "gains" << YAML::Value << YAML::BeginMap;
  table("access", s.gains.access);
  table("backhaul", s.gains.backhaul);
  out << YAML::EndMap;
  out << YAML::EndMap;
}

inline std::string to_yaml(const Scenario& s) {
  YAML::Emitter out;
  emit_scenario(out, s);
  return std::string(out.c_str()) + "\n";
}

inline std::string to_yaml(const GenerationConfig& cfg) {
  YAML::Emitter out;
  emit_config(out, cfg);
  return std::string(out.c_str()) + "\n";
}

/// Stable fingerprint of a scenario's serialized form.
inline std::string scenario_hash(const Scenario& s) { return to_hex(fnv1a64(to_yaml(s))); }

}  // namespace semcom::io
