#pragma once

#include "kinnet/indicators.hpp"
#include "kinnet/panel.hpp"
#include "kinnet/records.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kinnet {

/// Linear model used to derive a socio indicator from the true (planted)
/// dynastic indicators, with province random intercepts and row noise.
struct SynthSocioModel {
  double intercept = 0.6;
  double c_acc = 0.0;
  double c_ccd = 0.0;
  double c_cgc = 0.0;
  double c_log_hhi = 0.0;
  double sigma_province = 0.05;
  double sigma_noise = 0.02;
};

struct SynthConfig {
  int n_provinces = 8;
  std::vector<int> years = {2004, 2007, 2010, 2013, 2016, 2019, 2022};
  int clans_min = 2;
  int clans_max = 5;
  int clan_size_min = 2;
  int clan_size_max = 6;
  int singletons_min = 3;
  int singletons_max = 8;
  double intermarriage_prob = 0.0; // clan bridges to its predecessor clan
  std::vector<std::string> parties = {"LP", "PDPLBN", "NPC", "NP", "LKS-CMD"};
  double party_cohesion = 0.8; // member adopts the clan party with this prob
  double hop_prob_dynastic = 0.30;
  double hop_prob_non_dynastic = 0.10;
  double singleton_presence = 0.85; // singleton active in a given year
  // seat pool per province-year
  int municipalities = 6;
  int councilors_per_municipality = 6;
  int board_members = 4;
  int house_reps = 2;
  SynthSocioModel hdi_model{0.6, 0.0, 0.0, 0.0, 0.0, 0.05, 0.02};
  SynthSocioModel pov_model{0.3, 0.0, 0.0, 0.0, 0.0, 0.05, 0.02};
  std::uint64_t seed = 1;
};

struct GroundTruth {
  std::vector<int> clan_of_record;      // parallel to records, -1 = singleton
  std::vector<std::size_t> hop_records; // indices whose party truly changed
  std::map<std::string, double> hdi_intercepts;
  std::map<std::string, double> pov_intercepts;
  std::vector<IndicatorRow> true_indicators; // under the planted partition
};

struct SynthData {
  Dataset records;
  std::vector<SocioRow> socio;
  GroundTruth truth;
};

/// Seeded synthetic election panel. Clan members share a surname (so each
/// planted clan is a clique) and draw all other name tokens from disjoint
/// pools; intermarriage links a clan to its predecessor through one member's
/// middle name. Persons persist across cycles so hopper logic applies.
/// Identical configs produce byte-identical datasets. Throws when the active
/// population cannot fit the configured seat pool.
SynthData generate(const SynthConfig& config);

} // namespace kinnet
