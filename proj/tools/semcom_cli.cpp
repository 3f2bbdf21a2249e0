// semcom: command-line front end.
//
//   semcom run --spec <file> --out <dir> [--workers N] [--grid-M M] [--mode joint|nocollab|noshare ...]
//   semcom gen-scenario --config <file> --seed S --out <file>
//   semcom solve-one --scenario <file> --md i --bs j --subch k [--grid-M M] [--mode m]
//
// Exit codes: 0 success, 1 I/O or unexpected error, 2 configuration error,
// 3 solver error.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "semcom/semcom.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

std::string decision_yaml(const semcom::Scenario& s, int i, int j, int k, const semcom::JointOptions& opts,
                          const semcom::JointDecision& d, const semcom::JointStats& stats) {
  using semcom::format_double;
  const auto split = semcom::knowledge_split(s, i, j);
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "md" << YAML::Value << i;
  out << YAML::Key << "bs" << YAML::Value << j;
  out << YAML::Key << "subch" << YAML::Value << k;
  out << YAML::Key << "mode" << YAML::Value << semcom::to_string(opts.mode);
  out << YAML::Key << "grid_M" << YAML::Value << opts.grid_m;
  out << YAML::Key << "matched" << YAML::Value << YAML::Flow << split.matched;
  out << YAML::Key << "mismatched" << YAML::Value << YAML::Flow << split.mismatched();
  out << YAML::Key << "shared_at_mbs" << YAML::Value << YAML::Flow << split.shared_at_mbs;
  out << YAML::Key << "feasible" << YAML::Value << d.feasible;
  if (d.feasible) {
    std::vector<int> a(d.a.begin(), d.a.end()), b(d.b.begin(), d.b.end());
    out << YAML::Key << "a" << YAML::Value << YAML::Flow << a;
    out << YAML::Key << "b" << YAML::Value << YAML::Flow << b;
    out << YAML::Key << "xi" << YAML::Value << format_double(d.xi);
    out << YAML::Key << "xi_index" << YAML::Value << d.xi_index;
    out << YAML::Key << "accuracy" << YAML::Value << format_double(s.accuracy(d.xi));
    out << YAML::Key << "gamma_suts_per_s" << YAML::Value << format_double(d.gamma);
    const auto& t = d.timing;
    out << YAML::Key << "timing" << YAML::Value << YAML::BeginMap;
    for (auto [name, v] : {std::pair{"t_up", t.t_up}, {"t_down", t.t_down}, {"t_K", t.t_K}, {"t_S", t.t_S},
                           {"t_B", t.t_B}, {"t_R", t.t_R}, {"t_E", t.t_E}, {"t_total", t.t_total}})
      out << YAML::Key << name << YAML::Value << format_double(v);
    out << YAML::EndMap;
  }
  out << YAML::Key << "stats" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "bnb_runs" << YAML::Value << stats.bnb_runs;
  out << YAML::Key << "nodes_explored" << YAML::Value << stats.nodes_explored;
  out << YAML::Key << "nodes_pruned" << YAML::Value << stats.nodes_pruned;
  out << YAML::Key << "fp_iterations" << YAML::Value << stats.fp_iterations;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic-bit two-tier network simulator and GESTR optimizer"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a Monte Carlo sweep and write CSV results");
  std::string spec_path, out_dir;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::optional<int> run_grid;
  std::vector<std::string> run_modes;
  bool timing = false;
  run->add_option("--spec", spec_path, "Sweep spec (YAML)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--workers", workers, "Worker threads (capped by SEMCOM_MAX_WORKERS)")->check(CLI::PositiveNumber);
  run->add_option("--grid-M", run_grid, "Extraction-ratio grid segments")->check(CLI::PositiveNumber);
  run->add_option("--mode", run_modes, "Solver modes: joint, nocollab, noshare");
  run->add_flag("--timing", timing, "Record wall-clock time in the wall_ms column (output no longer byte-stable)");

  // gen-scenario
  auto* gen = app.add_subcommand("gen-scenario", "Generate a random scenario file");
  std::string config_path, scenario_out;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--config", config_path, "Generation config (YAML)")->required();
  gen->add_option("--seed", gen_seed, "Seed (overrides the config)");
  gen->add_option("--out", scenario_out, "Output scenario file")->required();

  // solve-one
  auto* one = app.add_subcommand("solve-one", "Solve the joint subproblem for one (MD, BS, subchannel)");
  std::string scenario_path;
  int md = 0, bs = 0, subch = 0, one_grid = 50;
  std::string one_mode = "joint";
  one->add_option("--scenario", scenario_path, "Scenario file (YAML)")->required();
  one->add_option("--md", md, "MD index (0-based)")->required();
  one->add_option("--bs", bs, "BS index (0 = MBS)")->required();
  one->add_option("--subch", subch, "Subchannel index (0-based)")->required();
  one->add_option("--grid-M", one_grid, "Extraction-ratio grid segments")->check(CLI::PositiveNumber);
  one->add_option("--mode", one_mode, "Solver mode: joint, nocollab, noshare");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      auto spec = semcom::load_sweep(spec_path);
      if (run_grid) spec.grid_m = *run_grid;
      if (!run_modes.empty()) {
        spec.modes.clear();
        for (const auto& m : run_modes) spec.modes.push_back(semcom::parse_solver_mode(m));
      }
      spec.validate();
      semcom::SweepOptions opts;
      opts.workers = workers;
      opts.record_wall_time = timing;
      const auto t0 = std::chrono::steady_clock::now();
      const auto result = semcom::run_sweep(spec, opts);
      semcom::write_outputs(result, spec, out_dir);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::cerr << "wrote " << result.rows.size() << " rows to " << out_dir << " in " << secs << " s\n";
      std::cout << semcom::summary_text(result, spec);
    } else if (*gen) {
      auto cfg = semcom::io::load_config(config_path);
      if (gen_seed) cfg.seed = *gen_seed;
      write_file(scenario_out, semcom::io::to_yaml(semcom::generate(cfg)));
    } else if (*one) {
      const auto s = semcom::io::load_scenario(scenario_path);
      semcom::JointOptions opts;
      opts.grid_m = one_grid;
      opts.mode = semcom::parse_solver_mode(one_mode);
      semcom::JointStats stats;
      const auto d = semcom::solve_joint(s, md, bs, subch, opts, &stats);
      std::cout << decision_yaml(s, md, bs, subch, opts, d, stats);
    }
  } catch (const semcom::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const semcom::IndexError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const semcom::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
