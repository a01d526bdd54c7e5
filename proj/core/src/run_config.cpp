#include "kinnet/run_config.hpp"

#include "kinnet/csv.hpp"
#include "kinnet/version.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>

namespace kinnet {

namespace {

using nlohmann::json;

json socio_model_to_json(const SynthSocioModel& m) {
  return json{{"intercept", m.intercept}, {"c_acc", m.c_acc},
              {"c_ccd", m.c_ccd},         {"c_cgc", m.c_cgc},
              {"c_log_hhi", m.c_log_hhi}, {"sigma_province", m.sigma_province},
              {"sigma_noise", m.sigma_noise}};
}

void socio_model_from_json(const json& j, SynthSocioModel& m) {
  m.intercept = j.value("intercept", m.intercept);
  m.c_acc = j.value("c_acc", m.c_acc);
  m.c_ccd = j.value("c_ccd", m.c_ccd);
  m.c_cgc = j.value("c_cgc", m.c_cgc);
  m.c_log_hhi = j.value("c_log_hhi", m.c_log_hhi);
  m.sigma_province = j.value("sigma_province", m.sigma_province);
  m.sigma_noise = j.value("sigma_noise", m.sigma_noise);
}

json to_json_object(const RunConfig& c) {
  json j;
  j["inputs"] = {{"records", c.inputs.records},
                 {"aux", c.inputs.aux},
                 {"socio", c.inputs.socio},
                 {"delimiter", std::string(1, c.inputs.delimiter)}};
  j["election_years"] = c.election_years;
  j["leiden"] = {{"gamma", c.leiden.gamma},
                 {"seed", c.leiden.seed},
                 {"weighted", c.leiden.weighted}};
  j["linkage"] = {{"threshold", c.linkage.threshold}, {"fields", c.linkage.fields}};
  json mpm = json::object();
  for (const auto& [year, party] : c.major_party_map) {
    mpm[std::to_string(year)] = party;
  }
  j["major_party_map"] = mpm;
  j["major_parties"] = c.major_parties;
  j["regression"] = {{"log_base", c.regression.log_base},
                     {"reml", c.regression.reml},
                     {"exact_wilcoxon_cutoff", c.regression.exact_wilcoxon_cutoff},
                     {"trend_granularity", c.regression.trend_granularity},
                     {"overlap_size_weighted", c.regression.overlap_size_weighted},
                     {"acc_normalized", c.regression.acc_normalized},
                     {"first_year", c.regression.first_year},
                     {"last_year", c.regression.last_year},
                     {"lag_years", c.regression.lag_years}};
  j["synth"] = {{"n_provinces", c.synth.n_provinces},
                {"years", c.synth.years},
                {"clans_min", c.synth.clans_min},
                {"clans_max", c.synth.clans_max},
                {"clan_size_min", c.synth.clan_size_min},
                {"clan_size_max", c.synth.clan_size_max},
                {"singletons_min", c.synth.singletons_min},
                {"singletons_max", c.synth.singletons_max},
                {"intermarriage_prob", c.synth.intermarriage_prob},
                {"parties", c.synth.parties},
                {"party_cohesion", c.synth.party_cohesion},
                {"hop_prob_dynastic", c.synth.hop_prob_dynastic},
                {"hop_prob_non_dynastic", c.synth.hop_prob_non_dynastic},
                {"singleton_presence", c.synth.singleton_presence},
                {"municipalities", c.synth.municipalities},
                {"councilors_per_municipality", c.synth.councilors_per_municipality},
                {"board_members", c.synth.board_members},
                {"house_reps", c.synth.house_reps},
                {"hdi_model", socio_model_to_json(c.synth.hdi_model)},
                {"pov_model", socio_model_to_json(c.synth.pov_model)},
                {"seed", c.synth.seed}};
  j["columns"] = {{"last_name", c.columns.last_name},
                  {"first_name", c.columns.first_name},
                  {"middle_name", c.columns.middle_name},
                  {"position", c.columns.position},
                  {"party", c.columns.party},
                  {"region", c.columns.region},
                  {"province", c.columns.province},
                  {"municipality", c.columns.municipality},
                  {"year", c.columns.year},
                  {"community_id", c.columns.community_id},
                  {"dynastic", c.columns.dynastic},
                  {"hopper", c.columns.hopper}};
  j["workers"] = c.workers;
  return j;
}

} // namespace

RunConfig RunConfig::load(const std::string& path) {
  const json j = json::parse(csv::read_text_file(path));
  RunConfig c;
  if (j.contains("inputs")) {
    const auto& in = j.at("inputs");
    c.inputs.records = in.value("records", c.inputs.records);
    c.inputs.aux = in.value("aux", c.inputs.aux);
    c.inputs.socio = in.value("socio", c.inputs.socio);
    const std::string delim = in.value("delimiter", std::string(1, c.inputs.delimiter));
    if (!delim.empty()) c.inputs.delimiter = delim[0];
  }
  c.election_years = j.value("election_years", c.election_years);
  if (j.contains("leiden")) {
    const auto& l = j.at("leiden");
    c.leiden.gamma = l.value("gamma", c.leiden.gamma);
    c.leiden.seed = l.value("seed", c.leiden.seed);
    c.leiden.weighted = l.value("weighted", c.leiden.weighted);
  }
  if (j.contains("linkage")) {
    const auto& l = j.at("linkage");
    c.linkage.threshold = l.value("threshold", c.linkage.threshold);
    c.linkage.fields = l.value("fields", c.linkage.fields);
  }
  if (j.contains("major_party_map")) {
    c.major_party_map.clear();
    for (const auto& [key, value] : j.at("major_party_map").items()) {
      c.major_party_map[std::stoi(key)] = value.get<std::string>();
    }
  }
  c.major_parties = j.value("major_parties", c.major_parties);
  if (j.contains("regression")) {
    const auto& r = j.at("regression");
    c.regression.log_base = r.value("log_base", c.regression.log_base);
    c.regression.reml = r.value("reml", c.regression.reml);
    c.regression.exact_wilcoxon_cutoff =
        r.value("exact_wilcoxon_cutoff", c.regression.exact_wilcoxon_cutoff);
    c.regression.trend_granularity =
        r.value("trend_granularity", c.regression.trend_granularity);
    c.regression.overlap_size_weighted =
        r.value("overlap_size_weighted", c.regression.overlap_size_weighted);
    c.regression.acc_normalized = r.value("acc_normalized", c.regression.acc_normalized);
    c.regression.first_year = r.value("first_year", c.regression.first_year);
    c.regression.last_year = r.value("last_year", c.regression.last_year);
    c.regression.lag_years = r.value("lag_years", c.regression.lag_years);
  }
  if (j.contains("synth")) {
    const auto& s = j.at("synth");
    c.synth.n_provinces = s.value("n_provinces", c.synth.n_provinces);
    c.synth.years = s.value("years", c.synth.years);
    c.synth.clans_min = s.value("clans_min", c.synth.clans_min);
    c.synth.clans_max = s.value("clans_max", c.synth.clans_max);
    c.synth.clan_size_min = s.value("clan_size_min", c.synth.clan_size_min);
    c.synth.clan_size_max = s.value("clan_size_max", c.synth.clan_size_max);
    c.synth.singletons_min = s.value("singletons_min", c.synth.singletons_min);
    c.synth.singletons_max = s.value("singletons_max", c.synth.singletons_max);
    c.synth.intermarriage_prob = s.value("intermarriage_prob", c.synth.intermarriage_prob);
    c.synth.parties = s.value("parties", c.synth.parties);
    c.synth.party_cohesion = s.value("party_cohesion", c.synth.party_cohesion);
    c.synth.hop_prob_dynastic = s.value("hop_prob_dynastic", c.synth.hop_prob_dynastic);
    c.synth.hop_prob_non_dynastic =
        s.value("hop_prob_non_dynastic", c.synth.hop_prob_non_dynastic);
    c.synth.singleton_presence = s.value("singleton_presence", c.synth.singleton_presence);
    c.synth.municipalities = s.value("municipalities", c.synth.municipalities);
    c.synth.councilors_per_municipality =
        s.value("councilors_per_municipality", c.synth.councilors_per_municipality);
    c.synth.board_members = s.value("board_members", c.synth.board_members);
    c.synth.house_reps = s.value("house_reps", c.synth.house_reps);
    if (s.contains("hdi_model")) socio_model_from_json(s.at("hdi_model"), c.synth.hdi_model);
    if (s.contains("pov_model")) socio_model_from_json(s.at("pov_model"), c.synth.pov_model);
    c.synth.seed = s.value("seed", c.synth.seed);
  }
  if (j.contains("columns")) {
    const auto& col = j.at("columns");
    c.columns.last_name = col.value("last_name", c.columns.last_name);
    c.columns.first_name = col.value("first_name", c.columns.first_name);
    c.columns.middle_name = col.value("middle_name", c.columns.middle_name);
    c.columns.position = col.value("position", c.columns.position);
    c.columns.party = col.value("party", c.columns.party);
    c.columns.region = col.value("region", c.columns.region);
    c.columns.province = col.value("province", c.columns.province);
    c.columns.municipality = col.value("municipality", c.columns.municipality);
    c.columns.year = col.value("year", c.columns.year);
    c.columns.community_id = col.value("community_id", c.columns.community_id);
    c.columns.dynastic = col.value("dynastic", c.columns.dynastic);
    c.columns.hopper = col.value("hopper", c.columns.hopper);
  }
  c.workers = j.value("workers", c.workers);
  return c;
}

std::string RunConfig::to_json() const {
  return to_json_object(*this).dump(2);
}

void RunConfig::save(const std::string& path) const {
  csv::write_text_file(path, to_json() + "\n");
}

std::string RunConfig::hash() const {
  const std::string text = to_json();
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

std::string RunConfig::meta_line() const {
  return std::string(kToolName) + " " + std::string(kToolVersion) +
         " config=" + hash();
}

} // namespace kinnet
