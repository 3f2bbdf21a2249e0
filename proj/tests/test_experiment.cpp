#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace semcom;
using Catch::Approx;

namespace {

SweepSpec small_spec() {
  SweepSpec spec;
  spec.swept_parameter = SweptParameter::DelayTolerance;
  spec.values = {2.5, 3.0, 3.5};
  spec.num_runs = 2;
  spec.base_seed = 11;
  spec.grid_m = 6;
  spec.modes = {SolverMode::Joint, SolverMode::NoCollaboration};
  return spec;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("row counts", "[experiment]") {
  const auto spec = small_spec();
  const auto res = run_sweep(spec);
  CHECK(res.rows.size() == 12);
  const auto csv = csv_text(res);
  CHECK(count_lines(csv) == 13);
  CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);

  SweepSpec one = spec;
  one.num_runs = 1;
  one.values = {3.0};
  CHECK(run_sweep(one).rows.size() == one.modes.size());

  CHECK(csv_text(ExperimentResult{}) == std::string(kCsvHeader) + "\n");
}

TEST_CASE("row order and pairing", "[experiment]") {
  const auto spec = small_spec();
  const auto res = run_sweep(spec);
  std::size_t n = 0;
  for (std::size_t v = 0; v < spec.values.size(); ++v)
    for (std::size_t m = 0; m < spec.modes.size(); ++m)
      for (int r = 0; r < spec.num_runs; ++r, ++n) {
        const auto& row = res.rows[n];
        CHECK(row.sweep_value == spec.values[v]);
        CHECK(row.mode == spec.modes[m]);
        CHECK(row.run_index == r);
        CHECK(row.run_seed == run_seed(spec, r));
        CHECK(row.wall_ms == 0.0);
      }
  // Joint dominates NoCollaboration on paired seeds.
  for (std::size_t v = 0; v < spec.values.size(); ++v)
    for (int r = 0; r < spec.num_runs; ++r) {
      const auto& joint = res.rows[(v * 2 + 0) * 2 + static_cast<std::size_t>(r)];
      const auto& nocollab = res.rows[(v * 2 + 1) * 2 + static_cast<std::size_t>(r)];
      CHECK(joint.total_gestr >= nocollab.total_gestr * (1 - 1e-9));
    }
}

TEST_CASE("deterministic across worker counts", "[experiment]") {
  const auto spec = small_spec();
  const auto a = csv_text(run_sweep(spec, {1, false}));
  const auto b = csv_text(run_sweep(spec, {3, false}));
  CHECK(a == b);
  CHECK(runs_metadata_text(run_sweep(spec, {2, false})) == runs_metadata_text(run_sweep(spec, {1, false})));
}

TEST_CASE("slack delay tolerance saturates", "[experiment]") {
  SweepSpec spec = small_spec();
  spec.values = {1e6, 2e6};
  spec.modes = {SolverMode::Joint};
  const auto res = run_sweep(spec);
  for (int r = 0; r < spec.num_runs; ++r)
    CHECK(res.rows[static_cast<std::size_t>(r)].total_gestr ==
          res.rows[static_cast<std::size_t>(spec.num_runs + r)].total_gestr);
}

TEST_CASE("network totals equal the assignment sum", "[experiment]") {
  const auto s = semcom::testing::default_scenario(8);
  JointOptions opt;
  opt.grid_m = 5;
  const auto net = solve_network(s, opt);
  double sum = 0.0;
  for (const auto& t : net.assignment.delta) {
    sum += t.gamma;
    CHECK(solve_joint(s, t.md, t.bs, t.subchannel, opt).gamma == t.gamma);
  }
  CHECK(sum == net.assignment.total);
}

TEST_CASE("output files", "[experiment]") {
  const auto spec = small_spec();
  const auto res = run_sweep(spec);
  const auto dir = std::filesystem::temp_directory_path() / "semcom_test_outputs";
  std::filesystem::remove_all(dir);
  write_outputs(res, spec, dir);
  for (const char* f : {"results.csv", "runs.csv", "summary.csv", "spec.yaml"}) CHECK(std::filesystem::exists(dir / f));
  std::ifstream in(dir / "results.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == csv_text(res));
  CHECK(to_yaml(load_sweep((dir / "spec.yaml").string())) == to_yaml(spec));
  CHECK(count_lines(summary_text(res, spec)) == 1 + spec.values.size() * spec.modes.size());
  CHECK(res.mean_total(3.0, SolverMode::Joint) ==
        Approx((res.rows[4].total_gestr + res.rows[5].total_gestr) / 2).epsilon(1e-15));
}

TEST_CASE("worker cap", "[experiment]") {
  ::setenv("SEMCOM_MAX_WORKERS", "2", 1);
  CHECK(capped_workers(8) == 2);
  CHECK(capped_workers(1) == 1);
  ::unsetenv("SEMCOM_MAX_WORKERS");
  CHECK(capped_workers(8) == 8);
  CHECK(capped_workers(0) == 1);
}
