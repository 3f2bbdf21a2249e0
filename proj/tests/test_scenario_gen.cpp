#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace semcom;
using Catch::Approx;

TEST_CASE("generation is deterministic", "[gen]") {
  GenerationConfig cfg;
  cfg.seed = 1234;
  CHECK(io::to_yaml(generate(cfg)) == io::to_yaml(generate(cfg)));
  cfg.seed = 1235;
  const auto other = io::to_yaml(generate(cfg));
  cfg.seed = 1234;
  CHECK(io::to_yaml(generate(cfg)) != other);
}

TEST_CASE("default shapes and ranges", "[gen]") {
  GenerationConfig cfg;
  cfg.seed = 3;
  const auto s = generate(cfg);
  REQUIRE(s.num_mds() == 3);
  REQUIRE(s.num_bs() == 2);
  CHECK(s.num_subchannels() == 5);
  CHECK(s.base_stations[0].kb_classes.size() == 6);
  CHECK(s.base_stations[1].kb_classes.size() == 5);
  CHECK(s.base_stations[0].position.x == -150.0);
  CHECK(s.base_stations[1].position.x == 0.0);
  CHECK(*s.base_stations[0].backhaul_tx_power_w == 20.0);
  CHECK(s.base_stations[0].compute_speed == 4e9);
  CHECK(s.base_stations[1].compute_speed == 2e9);
  for (const auto& md : s.mobile_devices) {
    CHECK(md.classes.size() == 6);
    CHECK(std::hypot(md.position.x, md.position.y) <= 150.0);
    CHECK(md.accuracy_threshold >= 0.7);
    CHECK(md.accuracy_threshold <= 0.85);
    CHECK(md.delay_tolerance >= 2.5);
    CHECK(md.delay_tolerance <= 3.5);
    for (const auto& c : md.classes) {
      CHECK(c.semantic_info >= 2e6);
      CHECK(c.semantic_info <= 20e6);
      CHECK(c.knowledge_bits >= 5e6);
      CHECK(c.knowledge_bits <= 50e6);
      CHECK(c.source_bits >= 20e6);
      CHECK(c.source_bits <= 100e6);
      CHECK(c.compute_cycles >= 1e6);
      CHECK(c.compute_cycles <= 100e6);
    }
  }
}

TEST_CASE("gain at the cell edge", "[gen]") {
  CHECK(link_gain(1e-3, 1.0, 150.0, 1.0) == Approx(4.4444e-8).epsilon(1e-4));
  CHECK(link_gain(1e-3, 1.0, 0.2, 1.0) == Approx(1e-3));
}

TEST_CASE("disk positions are area-uniform", "[gen]") {
  Rng rng(42);
  double sum = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const auto p = sample_disk_point(rng, 150.0);
    sum += p.x * p.x + p.y * p.y;
  }
  CHECK(sum / n == Approx(150.0 * 150.0 / 2).epsilon(0.02));
}

TEST_CASE("fading has unit mean", "[gen]") {
  Rng rng(43);
  double sum = 0.0;
  const int n = 100000;
  for (int t = 0; t < n; ++t) sum += sample_fading_power(rng);
  CHECK(sum / n >= 0.98);
  CHECK(sum / n <= 1.02);
}

TEST_CASE("class sampling", "[gen]") {
  Rng rng(44);
  for (int t = 0; t < 100; ++t) {
    const auto c = sample_classes(rng, 10, 6);
    REQUIRE(c.size() == 6);
    CHECK(std::is_sorted(c.begin(), c.end()));
    CHECK(std::adjacent_find(c.begin(), c.end()) == c.end());
    CHECK(c.front() >= 0);
    CHECK(c.back() < 10);
  }
}

TEST_CASE("full MBS knowledge base leaves nothing mismatched", "[gen]") {
  GenerationConfig cfg;
  cfg.mbs_kb_size = cfg.num_classes;
  const auto s = generate(cfg);
  for (int i = 0; i < s.num_mds(); ++i) CHECK(knowledge_split(s, i, 0).mismatched().empty());
}

TEST_CASE("several SBSs", "[gen]") {
  GenerationConfig cfg;
  cfg.num_sbs = 3;
  const auto s = generate(cfg);
  REQUIRE(s.num_bs() == 4);
  for (int j = 1; j <= 3; ++j) {
    const auto& p = s.base_stations[static_cast<std::size_t>(j)].position;
    CHECK(std::hypot(p.x, p.y) == Approx(75.0));
  }
  CHECK(s.gains.backhaul[0].size() == 3);
}

TEST_CASE("impossible sizes are rejected", "[gen]") {
  GenerationConfig cfg;
  cfg.md_required_size = 11;
  CHECK_THROWS_AS(generate(cfg), ConfigError);
  cfg = {};
  cfg.semantic_info = {5.0, 1.0};
  CHECK_THROWS_AS(generate(cfg), ConfigError);
}

TEST_CASE("seed derivation", "[gen]") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  CHECK(derive_seed(2, 0) != derive_seed(1, 0));
}
