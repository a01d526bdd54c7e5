#include "kinnet/synthgen.hpp"

#include "kinnet/ingest.hpp"
#include "kinnet/kin_graph.hpp"
#include "kinnet/leiden.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <map>

using namespace kinnet;

TEST_CASE("generate is deterministic for a fixed config") {
  SynthConfig config;
  config.n_provinces = 4;
  config.seed = 99;
  const SynthData a = generate(config);
  const SynthData b = generate(config);
  CHECK(canonical_csv(a.records, {}) == canonical_csv(b.records, {}));
  CHECK(a.truth.clan_of_record == b.truth.clan_of_record);
  CHECK(a.truth.hop_records == b.truth.hop_records);
  REQUIRE(a.socio.size() == b.socio.size());
  for (std::size_t i = 0; i < a.socio.size(); ++i) {
    CHECK(a.socio[i].hdi == b.socio[i].hdi);
    CHECK(a.socio[i].pov == b.socio[i].pov);
  }

  // a different seed moves the data
  config.seed = 100;
  const SynthData c = generate(config);
  CHECK(canonical_csv(a.records, {}) != canonical_csv(c.records, {}));
}

TEST_CASE("zero intermarriage keeps clans as separate components") {
  SynthConfig config;
  config.n_provinces = 5;
  config.intermarriage_prob = 0.0;
  config.seed = 7;
  const SynthData data = generate(config);

  // per (province, year): components = clans + singletons, so the true CCD
  // has the closed form 1 - (clans + singletons)/n
  for (const auto& row : data.truth.true_indicators) {
    std::map<int, int> clan_sizes;
    int singletons = 0;
    int n = 0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      const auto& rec = data.records[i];
      if (rec.province != row.province || rec.year != row.year) continue;
      ++n;
      const int clan = data.truth.clan_of_record[i];
      if (clan < 0) {
        ++singletons;
      } else {
        ++clan_sizes[clan];
      }
    }
    REQUIRE(n == row.n_nodes);
    const int expected_components = static_cast<int>(clan_sizes.size()) + singletons;
    CHECK(row.n_components == expected_components);
    CHECK(row.ccd ==
          doctest::Approx(1.0 - static_cast<double>(expected_components) / n));
  }
}

TEST_CASE("leiden recovers planted clans exactly when clans are cliques") {
  SynthConfig config;
  config.n_provinces = 6;
  config.intermarriage_prob = 0.0;
  config.seed = 20240810;
  const SynthData data = generate(config);

  for (const auto& [key, indices] : group_by_province_year(data.records)) {
    const KinGraph graph = build_graph(data.records, indices, key.province, key.year);
    const Partition partition = leiden(graph);

    std::vector<int> planted, detected;
    std::map<int, int> planted_dense;
    for (std::size_t v = 0; v < graph.nodes.size(); ++v) {
      const std::size_t rec = graph.nodes[v].record_index;
      const int clan = data.truth.clan_of_record[rec];
      const int key_label = clan >= 0 ? clan : -static_cast<int>(rec) - 1;
      auto [it, inserted] = planted_dense.emplace(
          key_label, static_cast<int>(planted_dense.size()));
      (void)inserted;
      planted.push_back(it->second);
      detected.push_back(partition.assignment[v]);
    }
    CHECK(testutil::adjusted_rand_index(planted, detected) == doctest::Approx(1.0));
  }
}

TEST_CASE("intermarriage bridges merge components") {
  SynthConfig config;
  config.n_provinces = 4;
  config.intermarriage_prob = 1.0; // every clan bridges to its predecessor
  config.singleton_presence = 1.0;
  config.seed = 5;
  const SynthData data = generate(config);
  for (const auto& row : data.truth.true_indicators) {
    int singletons = 0;
    for (std::size_t i = 0; i < data.records.size(); ++i) {
      if (data.records[i].province == row.province && data.records[i].year == row.year &&
          data.truth.clan_of_record[i] < 0) {
        ++singletons;
      }
    }
    // all clans chain into one component
    CHECK(row.n_components == singletons + 1);
  }
}

TEST_CASE("hop ground truth matches the hopper contract") {
  SynthConfig config;
  config.n_provinces = 5;
  config.seed = 303;
  SynthData data = generate(config);
  assign_hopper(data.records, config.years);

  // every truth hop is flagged, and every flag is a truth hop
  std::vector<bool> truth_flag(data.records.size(), false);
  for (std::size_t i : data.truth.hop_records) truth_flag[i] = true;
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    REQUIRE(data.records[i].hopper.has_value());
    CHECK(*data.records[i].hopper == truth_flag[i]);
  }
}

TEST_CASE("a full-scale panel yields one indicator row per province-year") {
  // 80 provinces x 7 electoral years -> 560 rows
  SynthConfig config;
  config.n_provinces = 80;
  config.seed = 1;
  SynthData data = generate(config);
  for (std::size_t i = 0; i < data.records.size(); ++i) {
    const int clan = data.truth.clan_of_record[i];
    data.records[i].community_id = clan >= 0 ? clan : 1000 + static_cast<int>(i);
  }
  const auto rows = compute_all(data.records);
  CHECK(rows.size() == 80 * 7);
}

TEST_CASE("infeasible configs are rejected") {
  SynthConfig config;
  config.municipalities = 1;
  config.councilors_per_municipality = 1;
  config.board_members = 0;
  config.house_reps = 0;
  config.clans_min = config.clans_max = 4;
  config.clan_size_min = config.clan_size_max = 6;
  CHECK_THROWS_WITH_AS(generate(config), doctest::Contains("infeasible"),
                       std::runtime_error);
}

TEST_CASE("socio table columns derive from the planted indicators") {
  SynthConfig config;
  config.n_provinces = 3;
  config.seed = 11;
  config.hdi_model.c_cgc = -0.5;
  config.hdi_model.sigma_noise = 0.0;
  config.hdi_model.sigma_province = 0.0;
  const SynthData data = generate(config);
  std::map<std::pair<std::string, int>, const IndicatorRow*> truth;
  for (const auto& row : data.truth.true_indicators) {
    truth[{row.province, row.year}] = &row;
  }
  for (const auto& socio : data.socio) {
    const auto* row = truth.at({socio.province, socio.year});
    REQUIRE(row->cgc.has_value());
    CHECK(*socio.hdi ==
          doctest::Approx(config.hdi_model.intercept - 0.5 * *row->cgc).epsilon(1e-12));
  }
}
