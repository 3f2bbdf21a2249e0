#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace semcom;
using Catch::Approx;

TEST_CASE("lattice counting", "[oracle]") {
  semcom::testing::TinySpec ts;
  ts.classes = {{0, 2e7, 1e7, 1e7, 1e8}};
  ts.mbs_kb = {0};
  ts.with_sbs = false;
  ts.t_max = 100.0;
  const auto s = semcom::testing::tiny_scenario(ts);
  const auto r = brute_force_joint(s, 0, 0, 0, 1, SolverMode::Joint);
  CHECK(r.evaluated_points == 2);
  CHECK(oracle_lattice_size(knowledge_split(s, 0, 0), 1, SolverMode::Joint) == 2);

  ts.classes = {{0, 2e7, 1e7, 1e7, 1e8}, {1, 3e7, 2e7, 4e6, 3e7}, {2, 4e7, 3e7, 5e6, 2e7}};
  ts.sbs_kb = {0};
  ts.mbs_kb = {5};  // classes 1 and 2 are upload-only at the SBS
  ts.with_sbs = true;
  const auto s2 = semcom::testing::tiny_scenario(ts);
  const auto r2 = brute_force_joint(s2, 0, 1, 0, 10, SolverMode::Joint);
  CHECK(r2.evaluated_points == 44);
  CHECK(oracle_lattice_size(knowledge_split(s2, 0, 1), 10, SolverMode::Joint) == 44);
  CHECK(brute_force_joint(s2, 0, 1, 0, 10, SolverMode::NoKnowledgeSharing).evaluated_points == 11);
}

TEST_CASE("guard refuses large lattices", "[oracle]") {
  semcom::testing::TinySpec ts;
  for (int l = 0; l < 11; ++l) ts.classes.push_back({l, 2e7, 1e7, 1e7, 1e8});
  ts.mbs_kb = {};
  ts.with_sbs = false;
  const auto s = semcom::testing::tiny_scenario(ts);
  CHECK_THROWS_AS(brute_force_joint(s, 0, 0, 0, 2, SolverMode::Joint), ContractError);
}

TEST_CASE("best dominates hand-picked decisions", "[oracle]") {
  semcom::testing::TestRng rng(31);
  for (const auto& inst : semcom::testing::oracle_instances(20, 3, 555)) {
    const auto& s = inst.scenario;
    const int M = 10;
    const auto rep = brute_force_joint(s, inst.i, inst.j, inst.k, M, SolverMode::Joint);
    const auto split = knowledge_split(s, inst.i, inst.j);
    const auto mis = split.mismatched();
    const auto& md = s.mobile_devices[static_cast<std::size_t>(inst.i)];
    const auto xi_th = min_extraction_ratio(s.accuracy, md.accuracy_threshold);
    REQUIRE(xi_th);
    const auto grid = extraction_grid(*xi_th, M);
    for (int n = 0; n < 10; ++n) {
      BinaryVector a(mis.size()), b(mis.size(), 1);
      for (std::size_t p = 0; p < mis.size(); ++p) {
        a[p] = static_cast<std::uint8_t>(semcom::testing::uniform_int(rng, 0, 1));
        if (a[p] && split.is_shared_at_mbs(mis[p]))
          b[p] = static_cast<std::uint8_t>(semcom::testing::uniform_int(rng, 0, 1));
      }
      const double xi = grid[static_cast<std::size_t>(semcom::testing::uniform_int(rng, 0, M))];
      if (timing(s, inst.i, inst.j, inst.k, a, b, xi).t_total > md.delay_tolerance) continue;
      REQUIRE(rep.best.feasible);
      CHECK(rep.best.gamma >= gestr(s, inst.i, inst.j, inst.k, a, b, xi));
    }
  }
}

TEST_CASE("joint solver matches the oracle", "[oracle]") {
  for (const auto& inst : semcom::testing::oracle_instances(40, 3, 31337)) {
    for (auto mode : {SolverMode::Joint, SolverMode::NoCollaboration, SolverMode::NoKnowledgeSharing}) {
      const auto rep = brute_force_joint(inst.scenario, inst.i, inst.j, inst.k, 20, mode);
      const auto d = solve_joint(inst.scenario, inst.i, inst.j, inst.k, 20, mode);
      INFO("seed " << inst.seed << " (" << inst.i << "," << inst.j << "," << inst.k << ") " << to_string(mode));
      REQUIRE(d.feasible == rep.best.feasible);
      if (!d.feasible) continue;
      CHECK(d.gamma == Approx(rep.best.gamma).epsilon(1e-6));
    }
  }
}

TEST_CASE("joint solver matches the oracle under tight delays", "[oracle]") {
  // Default delays rarely bind; shrinking t_max makes the delay row active so
  // that relaxations turn fractional and the search actually branches.
  semcom::testing::TestRng rng(8);
  long branched = 0, feasible = 0;
  for (auto inst : semcom::testing::oracle_instances(150, 3, 2718)) {
    auto& md = inst.scenario.mobile_devices[static_cast<std::size_t>(inst.i)];
    md.delay_tolerance *= semcom::testing::uniform(rng, 0.15, 0.8);
    for (auto mode : {SolverMode::Joint, SolverMode::NoCollaboration}) {
      JointOptions opt;
      opt.grid_m = 12;
      opt.mode = mode;
      opt.on_bnb = [&](const BnbResult& r) {
        branched += r.stats.nodes_explored > 1;
        if (r.feasible) CHECK(r.value <= r.stats.root_bound + 1e-9);
      };
      const auto d = solve_joint(inst.scenario, inst.i, inst.j, inst.k, opt);
      const auto rep = brute_force_joint(inst.scenario, inst.i, inst.j, inst.k, 12, mode);
      INFO("seed " << inst.seed << " (" << inst.i << "," << inst.j << "," << inst.k << ") " << to_string(mode));
      REQUIRE(d.feasible == rep.best.feasible);
      if (!d.feasible) continue;
      ++feasible;
      CHECK(d.gamma == Approx(rep.best.gamma).epsilon(1e-6));
      if (rep.runner_up_gamma < rep.best.gamma * (1 - 1e-9)) {
        CHECK(d.a == rep.best.a);
        CHECK(d.xi_index == rep.best.xi_index);
      }
    }
  }
  CHECK(feasible > 50);
  CHECK(branched > 5);
}
