#pragma once

// Monte Carlo sweeps over the full allocation pipeline:
//   solve_joint for every (i, j, k) -> build_assignment_problem ->
//   solve_assignment -> total GESTR.
// Each run draws one scenario that is reused for every sweep value and
// every mode, so the schemes are compared on paired instances.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "semcom/assignment_km.hpp"
#include "semcom/bnb_joint.hpp"
#include "semcom/scenario_gen.hpp"
#include "semcom/scenario_io.hpp"
#include "semcom/text_format.hpp"

namespace semcom {

enum class SweptParameter { DelayTolerance, AccuracyThreshold, MdTxPower, Bandwidth };

inline std::string to_string(SweptParameter p) {
  switch (p) {
    case SweptParameter::DelayTolerance: return "delay_tolerance";
    case SweptParameter::AccuracyThreshold: return "accuracy_threshold";
    case SweptParameter::MdTxPower: return "md_tx_power";
    case SweptParameter::Bandwidth: return "bandwidth";
  }
  return "?";
}

inline SweptParameter parse_swept_parameter(const std::string& s) {
  if (s == "delay_tolerance") return SweptParameter::DelayTolerance;
  if (s == "accuracy_threshold") return SweptParameter::AccuracyThreshold;
  if (s == "md_tx_power") return SweptParameter::MdTxPower;
  if (s == "bandwidth") return SweptParameter::Bandwidth;
  throw ConfigError("unknown swept_parameter '" + s +
                    "' (expected delay_tolerance|accuracy_threshold|md_tx_power|bandwidth)");
}

/// Applies a swept value uniformly (same for all MDs). Values are SI:
/// seconds, a fraction, Watts, Hz.
inline void apply_override(Scenario& s, SweptParameter p, double value) {
  switch (p) {
    case SweptParameter::DelayTolerance:
      for (auto& md : s.mobile_devices) md.delay_tolerance = value;
      break;
    case SweptParameter::AccuracyThreshold:
      for (auto& md : s.mobile_devices) md.accuracy_threshold = value;
      break;
    case SweptParameter::MdTxPower:
      for (auto& md : s.mobile_devices) md.tx_power_w = value;
      break;
    case SweptParameter::Bandwidth:
      s.radio.bandwidth_hz = value;
      break;
  }
  s.validate();
}

struct SweepSpec {
  SweptParameter swept_parameter = SweptParameter::DelayTolerance;
  std::vector<double> values{2.0, 2.5, 3.0, 3.5, 4.0};
  int num_runs = 100;
  std::uint64_t base_seed = 1;
  GenerationConfig base_config;
  std::vector<SolverMode> modes{SolverMode::Joint, SolverMode::NoCollaboration, SolverMode::NoKnowledgeSharing};
  int grid_m = 50;

  void validate() const {
    if (values.empty()) throw ConfigError("sweep: values must be nonempty");
    if (num_runs < 1) throw ConfigError("sweep: num_runs must be >= 1");
    if (modes.empty()) throw ConfigError("sweep: at least one mode is required");
    if (grid_m < 1) throw ConfigError("sweep: grid_M must be >= 1");
    base_config.validate();
  }
};

/// Seed of run r: SplitMix64-derived from the base seed, independent of the
/// worker that executes it.
inline std::uint64_t run_seed(const SweepSpec& spec, int run) {
  return derive_seed(spec.base_seed, static_cast<std::uint64_t>(run));
}

struct NetworkSolution {
  Assignment assignment;
  JointStats stats;
};

/// Full pipeline for one scenario and one mode.
inline NetworkSolution solve_network(const Scenario& s, const JointOptions& options) {
  NetworkSolution out;
  JointTable table;
  for (int i = 0; i < s.num_mds(); ++i)
    for (int j = 0; j < s.num_bs(); ++j)
      for (int k = 0; k < s.num_subchannels(); ++k) table[{i, j, k}] = solve_joint(s, i, j, k, options, &out.stats);
  out.assignment = solve_assignment(build_assignment_problem(s, table));
  return out;
}

struct RunRecord {
  double sweep_value = 0.0;
  SolverMode mode = SolverMode::Joint;
  int run_index = 0;
  std::uint64_t run_seed = 0;
  std::string scenario_hash;
  double total_gestr = 0.0;
  std::vector<AssignedTriple> assignments;
  JointStats stats;
  double wall_ms = 0.0;
};

struct ExperimentResult {
  SweptParameter swept_parameter = SweptParameter::DelayTolerance;
  // Ordered by (sweep value index, mode index, run index).
  std::vector<RunRecord> rows;

  /// Mean total GESTR over runs for one (value, mode) pair, summed in run order.
  double mean_total(double value, SolverMode mode) const {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : rows)
      if (r.sweep_value == value && r.mode == mode) {
        sum += r.total_gestr;
        ++n;
      }
    return n ? sum / n : 0.0;
  }
};

struct SweepOptions {
  int workers = 1;
  bool record_wall_time = false;  // wall_ms is 0 otherwise, keeping output byte-stable
};

/// Worker count after applying the SEMCOM_MAX_WORKERS cap (if set).
inline int capped_workers(int requested) {
  int n = std::max(1, requested);
  if (const char* env = std::getenv("SEMCOM_MAX_WORKERS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

inline ExperimentResult run_sweep(const SweepSpec& spec, const SweepOptions& opts = {}) {
  spec.validate();
  const std::size_t nv = spec.values.size(), nm = spec.modes.size(), nr = static_cast<std::size_t>(spec.num_runs);
  ExperimentResult result;
  result.swept_parameter = spec.swept_parameter;
  result.rows.resize(nv * nm * nr);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(nr);
  auto worker = [&] {
    for (std::size_t r = next++; r < nr; r = next++) {
      const std::uint64_t seed = run_seed(spec, static_cast<int>(r));
      try {
        GenerationConfig cfg = spec.base_config;
        cfg.seed = seed;
        const Scenario base = generate(cfg);
        for (std::size_t v = 0; v < nv; ++v) {
          Scenario s = base;
          apply_override(s, spec.swept_parameter, spec.values[v]);
          const std::string hash = io::scenario_hash(s);
          for (std::size_t m = 0; m < nm; ++m) {
            JointOptions jo;
            jo.grid_m = spec.grid_m;
            jo.mode = spec.modes[m];
            const auto t0 = std::chrono::steady_clock::now();
            auto sol = solve_network(s, jo);
            const auto t1 = std::chrono::steady_clock::now();
            auto& row = result.rows[(v * nm + m) * nr + r];
            row.sweep_value = spec.values[v];
            row.mode = spec.modes[m];
            row.run_index = static_cast<int>(r);
            row.run_seed = seed;
            row.scenario_hash = hash;
            row.total_gestr = sol.assignment.total;
            row.assignments = std::move(sol.assignment.delta);
            row.stats = sol.stats;
            if (opts.record_wall_time) row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
          }
        }
      } catch (const std::exception& e) {
        try {
          throw SolverError("run " + std::to_string(r) + " (seed " + std::to_string(seed) + "): " + e.what());
        } catch (...) {
          errors[r] = std::current_exception();
        }
      }
    }
  };

  const int nw = std::min<int>(capped_workers(opts.workers), static_cast<int>(nr));
  if (nw <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return result;
}

inline constexpr const char* kCsvHeader =
    "sweep_param,sweep_value,mode,run_seed,total_gestr_suts_per_s,matched_mds,nodes_explored,wall_ms";

inline std::string csv_text(const ExperimentResult& result) {
  std::string out = std::string(kCsvHeader) + "\n";
  const std::string param = to_string(result.swept_parameter);
  for (const auto& r : result.rows) {
    out += param;
    out += ',' + format_double(r.sweep_value);
    out += ',' + to_string(r.mode);
    out += ',' + std::to_string(r.run_seed);
    out += ',' + format_double(r.total_gestr);
    out += ',' + std::to_string(r.assignments.size());
    out += ',' + std::to_string(r.stats.nodes_explored);
    out += ',' + format_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace detail

/// Writes the results CSV (UTF-8, LF line endings).
inline void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
  detail::write_text(path, csv_text(result));
}

/// Sidecar with the per-row scenario fingerprint, assignments and solver
/// counters. Rows line up with the results CSV.
inline std::string runs_metadata_text(const ExperimentResult& result) {
  std::string out =
      "sweep_param,sweep_value,mode,run_seed,scenario_hash,assignments,bnb_runs,nodes_pruned,fp_iterations,"
      "lp_pivots\n";
  const std::string param = to_string(result.swept_parameter);
  for (const auto& r : result.rows) {
    std::string assigned;
    for (const auto& t : r.assignments) {
      if (!assigned.empty()) assigned += ';';
      assigned += std::to_string(t.md) + ':' + std::to_string(t.bs) + ':' + std::to_string(t.subchannel);
    }
    out += param + ',' + format_double(r.sweep_value) + ',' + to_string(r.mode) + ',' + std::to_string(r.run_seed) +
           ',' + r.scenario_hash + ',' + assigned + ',' + std::to_string(r.stats.bnb_runs) + ',' +
           std::to_string(r.stats.nodes_pruned) + ',' + std::to_string(r.stats.fp_iterations) + ',' +
           std::to_string(r.stats.lp_pivots) + '\n';
  }
  return out;
}

/// Mean total GESTR per (sweep value, mode).
inline std::string summary_text(const ExperimentResult& result, const SweepSpec& spec) {
  std::string out = "sweep_param,sweep_value,mode,num_runs,mean_total_gestr_suts_per_s\n";
  for (double v : spec.values)
    for (SolverMode m : spec.modes)
      out += to_string(result.swept_parameter) + ',' + format_double(v) + ',' + to_string(m) + ',' +
             std::to_string(spec.num_runs) + ',' + format_double(result.mean_total(v, m)) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Sweep spec YAML

inline SweepSpec sweep_from_yaml(const YAML::Node& node) {
  using namespace io::detail;
  const std::string w = "sweep spec";
  require_map(node, w);
  reject_unknown(node, {"swept_parameter", "values", "num_runs", "base_seed", "grid_M", "modes", "base_config"}, w);
  SweepSpec spec;
  spec.swept_parameter = parse_swept_parameter(get<std::string>(node, "swept_parameter", w));
  spec.values = get<std::vector<double>>(node, "values", w);
  get_opt(node, "num_runs", spec.num_runs, w);
  get_opt(node, "base_seed", spec.base_seed, w);
  get_opt(node, "grid_M", spec.grid_m, w);
  if (node["modes"]) {
    spec.modes.clear();
    for (const auto& m : get<std::vector<std::string>>(node, "modes", w)) spec.modes.push_back(parse_solver_mode(m));
  }
  if (node["base_config"]) spec.base_config = io::config_from_yaml(node["base_config"]);
  spec.validate();
  return spec;
}

inline SweepSpec parse_sweep(const std::string& text) { return sweep_from_yaml(io::detail::load_yaml(text, "sweep spec")); }

inline SweepSpec load_sweep(const std::string& path) { return parse_sweep(io::detail::read_file(path)); }

inline std::string to_yaml(const SweepSpec& spec) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "swept_parameter" << YAML::Value << to_string(spec.swept_parameter);
  out << YAML::Key << "values" << YAML::Value;
  io::detail::emit_numbers(out, spec.values);
  out << YAML::Key << "num_runs" << YAML::Value << spec.num_runs;
  out << YAML::Key << "base_seed" << YAML::Value << spec.base_seed;
  out << YAML::Key << "grid_M" << YAML::Value << spec.grid_m;
  out << YAML::Key << "modes" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto m : spec.modes) out << to_string(m);
  out << YAML::EndSeq;
  out << YAML::Key << "base_config" << YAML::Value;
  io::emit_config(out, spec.base_config);
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

/// results.csv, runs.csv (sidecar), summary.csv and the resolved spec.
inline void write_outputs(const ExperimentResult& result, const SweepSpec& spec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  emit_csv(result, dir / "results.csv");
  detail::write_text(dir / "runs.csv", runs_metadata_text(result));
  detail::write_text(dir / "summary.csv", summary_text(result, spec));
  detail::write_text(dir / "spec.yaml", to_yaml(spec));
}

}  // namespace semcom
