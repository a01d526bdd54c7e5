#pragma once

#include "kinnet/ingest.hpp"
#include "kinnet/party.hpp"
#include "kinnet/synthgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kinnet {

struct LeidenConfig {
  double gamma = 1.0;
  std::uint64_t seed = 42;
  bool weighted = true;
};

struct LinkageConfig {
  double threshold = 0.90;
  std::vector<std::string> fields = {"middle_name", "party"};
};

struct RegressionConfig {
  double log_base = 0.0; // 0 selects the natural log
  bool reml = false;
  int exact_wilcoxon_cutoff = 25;
  std::string trend_granularity = "pooled"; // or "yearly_means"
  bool overlap_size_weighted = false;
  bool acc_normalized = false;
  int first_year = 2007;
  int last_year = 2019;
  int lag_years = 3;
};

struct InputConfig {
  std::vector<std::string> records; // raw election files
  std::vector<std::string> aux;     // linkage sources
  std::string socio;                // province,year,pov,hdi table
  char delimiter = ',';
};

/// Everything a pipeline run depends on. Loaded from one JSON file; every
/// field has a default, so an empty object is a valid config.
struct RunConfig {
  InputConfig inputs;
  std::vector<int> election_years = {2004, 2007, 2010, 2013, 2016, 2019, 2022};
  LeidenConfig leiden;
  LinkageConfig linkage;
  MajorPartyMap major_party_map = default_major_party_map();
  std::vector<std::string> major_parties = {"LKS-CMD", "LKS-KAM", "LP", "PDPLBN", "PFP"};
  RegressionConfig regression;
  SynthConfig synth;
  ColumnMap columns;
  int workers = 0; // 0 = hardware concurrency; KINNET_WORKERS overrides

  static RunConfig load(const std::string& path);
  std::string to_json() const; // canonical (sorted keys), used for hashing
  void save(const std::string& path) const;

  /// FNV-1a over the canonical JSON, as a 16-digit hex string. Stamped into
  /// every output file so reruns are verifiable.
  std::string hash() const;

  /// "<tool> <version> config=<hash>"
  std::string meta_line() const;
};

} // namespace kinnet
