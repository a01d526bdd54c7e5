#include "kinnet/pipeline.hpp"

#include "kinnet/csv.hpp"
#include "kinnet/graphml.hpp"
#include "kinnet/indicators.hpp"
#include "kinnet/ingest.hpp"
#include "kinnet/leiden.hpp"
#include "kinnet/panel.hpp"
#include "kinnet/party.hpp"
#include "kinnet/regress.hpp"
#include "kinnet/stats.hpp"
#include "kinnet/synthgen.hpp"

#include "kinnet/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <thread>

namespace kinnet::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int worker_count(const RunConfig& config) {
  if (const char* env = std::getenv("KINNET_WORKERS")) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), value);
    if (ec == std::errc{} && ptr == env + std::string_view(env).size() && value > 0) {
      return value;
    }
  }
  if (config.workers > 0) return config.workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs f(i) for i in [0, n) on `workers` threads. Results must be written by
// index; merge order never depends on completion order. The first worker
// exception is rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
  if (n == 0) return;
  const int threads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& thread : pool) thread.join();
  if (error) std::rethrow_exception(error);
}

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

void require_file(const std::string& path, const std::string& hint) {
  if (!fs::exists(path)) {
    throw MissingInput("missing input file: " + path + " (" + hint + ")");
  }
}

std::string slug(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else {
      out.push_back('_');
    }
  }
  return out;
}

std::string opt_field(const std::optional<double>& value) {
  return value ? csv::format_double(*value) : "";
}

void write_json(const std::string& path, json j, const RunConfig& config) {
  j["_meta"] = {{"tool", std::string(kToolName) + " " + std::string(kToolVersion)},
                {"config_hash", config.hash()}};
  csv::write_text_file(path, j.dump(2) + "\n");
}

json fit_to_json(const FitOutcome& outcome) {
  if (!outcome.fit) return json{{"error", outcome.error}};
  const FitResult& fit = *outcome.fit;
  json coeffs = json::array();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    coeffs.push_back({{"name", fit.names[i]},
                      {"coefficient", fit.coefficients[i]},
                      {"std_error", fit.std_errors[i]},
                      {"p_value", fit.p_values[i]}});
  }
  json j{{"model", fit.model},
         {"response", fit.response},
         {"coefficients", coeffs},
         {"log_likelihood", fit.log_likelihood},
         {"aic", fit.aic},
         {"k_params", fit.k_params},
         {"n_obs", fit.n_obs},
         {"sigma2_e", fit.sigma2_e}};
  if (fit.model == "lmm") {
    j["sigma2_alpha"] = fit.sigma2_alpha;
    j["lambda"] = fit.lambda;
    j["marginal_r2"] = fit.marginal_r2;
    j["conditional_r2"] = fit.conditional_r2;
    j["n_groups"] = fit.n_groups;
    j["random_effect_degenerate"] = fit.random_effect_degenerate;
  } else {
    j["r2"] = fit.r2;
  }
  return j;
}

std::vector<IndicatorRow> read_indicators_csv(const std::string& path) {
  const csv::Table table = csv::read_file(path);
  auto col = [&](const char* name) {
    const int idx = table.column(name);
    if (idx < 0) throw std::runtime_error(path + ": missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(idx);
  };
  const auto c_province = col("province");
  const auto c_year = col("year");
  const auto c_hhi = col("hhi");
  const auto c_cgc = col("cgc");
  const auto c_ccd = col("ccd");
  const auto c_acc = col("acc");
  const auto c_nodes = col("n_nodes");
  const auto c_edges = col("n_edges");
  const auto c_comms = col("n_communities");
  const auto c_comps = col("n_components");

  std::vector<IndicatorRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& fields : table.rows) {
    IndicatorRow row;
    row.province = fields[c_province];
    row.year = std::stoi(fields[c_year]);
    row.hhi = std::stod(fields[c_hhi]);
    if (!fields[c_cgc].empty()) row.cgc = std::stod(fields[c_cgc]);
    row.ccd = std::stod(fields[c_ccd]);
    row.acc = std::stod(fields[c_acc]);
    row.n_nodes = std::stoi(fields[c_nodes]);
    row.n_edges = std::stoi(fields[c_edges]);
    row.n_communities = std::stoi(fields[c_comms]);
    row.n_components = std::stoi(fields[c_comps]);
    rows.push_back(std::move(row));
  }
  return rows;
}

Dataset load_canonical(const std::string& path, const RunConfig& config) {
  ParseResult parsed = read_canonical_csv(path, config.election_years);
  if (!parsed.errors.empty()) {
    throw std::runtime_error(path + ": " + std::to_string(parsed.errors.size()) +
                             " malformed rows in canonical file (first: " +
                             parsed.errors.front().message + ")");
  }
  return std::move(parsed.records);
}

std::string resolve_socio_path(const RunConfig& config, const std::string& out_dir) {
  if (!config.inputs.socio.empty()) return config.inputs.socio;
  const std::string generated = socio_output_path(out_dir);
  if (fs::exists(generated)) return generated;
  throw MissingInput("missing socio table: set inputs.socio in the config or run "
                     "'simulate' first (looked for " + generated + ")");
}

} // namespace

std::string canonical_path(const std::string& out_dir) { return out_dir + "/canonical.csv"; }
std::string communities_path(const std::string& out_dir) {
  return out_dir + "/canonical_communities.csv";
}
std::string partitions_path(const std::string& out_dir) { return out_dir + "/partitions.csv"; }
std::string indicators_path(const std::string& out_dir) { return out_dir + "/indicators.csv"; }
std::string socio_output_path(const std::string& out_dir) { return out_dir + "/socio.csv"; }
std::string graphs_dir(const std::string& out_dir) { return out_dir + "/graphs"; }

void run_ingest(const RunConfig& config, const std::string& out_dir) {
  if (config.inputs.records.empty()) {
    throw MissingInput("no input record files: set inputs.records in the config");
  }
  ensure_dir(out_dir);

  Dataset records;
  json file_reports = json::array();
  for (const auto& path : config.inputs.records) {
    require_file(path, "listed in inputs.records");
    ParseResult parsed =
        parse_records(path, config.columns, config.election_years, config.inputs.delimiter);
    json errors = json::array();
    for (const auto& err : parsed.errors) {
      errors.push_back({{"line", err.line}, {"message", err.message}});
    }
    file_reports.push_back({{"path", path},
                            {"rows", parsed.records.size()},
                            {"rejected", parsed.errors.size()},
                            {"errors", errors}});
    records.insert(records.end(), std::make_move_iterator(parsed.records.begin()),
                   std::make_move_iterator(parsed.records.end()));
  }

  json linkage_json;
  if (!config.inputs.aux.empty()) {
    Dataset aux;
    for (const auto& path : config.inputs.aux) {
      require_file(path, "listed in inputs.aux");
      ParseResult parsed =
          parse_records(path, config.columns, config.election_years, config.inputs.delimiter);
      aux.insert(aux.end(), std::make_move_iterator(parsed.records.begin()),
                 std::make_move_iterator(parsed.records.end()));
    }
    std::vector<LinkField> fields;
    for (const auto& field : config.linkage.fields) {
      if (field == "middle_name") fields.push_back(LinkField::MiddleName);
      else if (field == "party") fields.push_back(LinkField::Party);
      else throw std::runtime_error("unknown linkage field '" + field + "'");
    }
    const LinkageReport report =
        link_auxiliary(records, aux, fields, config.linkage.threshold);
    json items = json::array();
    for (const auto& item : report.items) {
      items.push_back({{"base_index", item.base_index},
                       {"field", item.field},
                       {"outcome", item.outcome},
                       {"similarity", item.similarity},
                       {"detail", item.detail}});
    }
    linkage_json = {{"matched", report.matched},
                    {"ambiguous", report.ambiguous},
                    {"unmatched", report.unmatched},
                    {"items", items}};
  } else {
    linkage_json = {{"matched", 0}, {"ambiguous", 0}, {"unmatched", 0},
                    {"items", json::array()}};
  }
  write_json(out_dir + "/linkage_report.json", linkage_json, config);

  const HopperReport hoppers = assign_hopper(records, config.election_years);
  write_json(out_dir + "/ingest_report.json",
             json{{"files", file_reports},
                  {"records", records.size()},
                  {"hopper", {{"flagged", hoppers.flagged},
                              {"excluded_duplicates", hoppers.excluded_duplicates},
                              {"log", hoppers.log}}}},
             config);

  write_canonical_csv(canonical_path(out_dir), records, {config.meta_line()});
}

void run_simulate(const RunConfig& config, const std::string& out_dir) {
  ensure_dir(out_dir);
  SynthData data = generate(config.synth);
  assign_hopper(data.records, config.election_years);
  write_canonical_csv(canonical_path(out_dir), data.records, {config.meta_line()});

  csv::Writer socio;
  socio.comment(config.meta_line());
  socio.row({"province", "year", "pov", "hdi"});
  for (const auto& row : data.socio) {
    socio.row({row.province, std::to_string(row.year), opt_field(row.pov),
               opt_field(row.hdi)});
  }
  csv::write_text_file(socio_output_path(out_dir), socio.str());

  json truth;
  truth["clan_of_record"] = data.truth.clan_of_record;
  truth["hop_records"] = data.truth.hop_records;
  truth["hdi_intercepts"] = data.truth.hdi_intercepts;
  truth["pov_intercepts"] = data.truth.pov_intercepts;
  json rows = json::array();
  for (const auto& row : data.truth.true_indicators) {
    json r{{"province", row.province}, {"year", row.year},   {"hhi", row.hhi},
           {"ccd", row.ccd},           {"acc", row.acc},     {"n_nodes", row.n_nodes},
           {"n_edges", row.n_edges},   {"n_communities", row.n_communities},
           {"n_components", row.n_components}};
    if (row.cgc) r["cgc"] = *row.cgc;
    rows.push_back(std::move(r));
  }
  truth["true_indicators"] = rows;
  write_json(out_dir + "/ground_truth.json", truth, config);
}

void run_detect(const RunConfig& config, const std::string& out_dir) {
  const std::string input = canonical_path(out_dir);
  require_file(input, "run 'ingest' or 'simulate' first");
  ensure_dir(out_dir);

  Dataset records = load_canonical(input, config);
  const auto groups = group_by_province_year(records);

  struct GroupResult {
    Partition partition;
    std::vector<std::size_t> node_record; // node -> record index
  };
  std::vector<GroupResult> results(groups.size());
  LeidenOptions options;
  options.gamma = config.leiden.gamma;
  options.seed = config.leiden.seed;
  options.weighted = config.leiden.weighted;

  parallel_for(groups.size(), worker_count(config), [&](std::size_t i) {
    const auto& [key, indices] = groups[i];
    const KinGraph graph = build_graph(records, indices, key.province, key.year);
    GroupResult result;
    result.partition = leiden(graph, options);
    result.node_record.reserve(graph.nodes.size());
    for (const auto& node : graph.nodes) result.node_record.push_back(node.record_index);
    results[i] = std::move(result);
  });

  json detection = json::array();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& [key, indices] = groups[i];
    const auto& result = results[i];
    for (std::size_t v = 0; v < result.node_record.size(); ++v) {
      records[result.node_record[v]].community_id = result.partition.assignment[v];
    }
    detection.push_back({{"province", key.province},
                         {"year", key.year},
                         {"n_nodes", result.node_record.size()},
                         {"n_communities", result.partition.num_communities},
                         {"modularity", result.partition.modularity}});
  }
  assign_dynastic(records);

  write_canonical_csv(communities_path(out_dir), records, {config.meta_line()});
  write_json(out_dir + "/detection_report.json", json{{"groups", detection}}, config);

  csv::Writer partitions;
  partitions.comment(config.meta_line());
  partitions.row({"province", "year", "last_name", "first_name", "middle_name",
                  "position", "community_id"});
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const auto& result = results[i];
    for (std::size_t v = 0; v < result.node_record.size(); ++v) {
      const auto& rec = records[result.node_record[v]];
      partitions.row({rec.province, std::to_string(rec.year), rec.last_name,
                      rec.first_name, rec.middle_name.value_or(""),
                      std::string(position_token(rec.position)),
                      std::to_string(result.partition.assignment[v])});
    }
  }
  csv::write_text_file(partitions_path(out_dir), partitions.str());
}

void run_graph(const RunConfig& config, const std::string& out_dir) {
  std::string input = communities_path(out_dir);
  if (!fs::exists(input)) input = canonical_path(out_dir);
  require_file(input, "run 'ingest', 'simulate' or 'detect' first");
  ensure_dir(graphs_dir(out_dir));

  const Dataset records = load_canonical(input, config);
  const auto groups = group_by_province_year(records);
  const std::string meta = config.meta_line();

  parallel_for(groups.size(), worker_count(config), [&](std::size_t i) {
    const auto& [key, indices] = groups[i];
    const KinGraph graph = build_graph(records, indices, key.province, key.year);
    const std::string xml = to_graphml(graph, records, nullptr, meta);
    csv::write_text_file(
        graphs_dir(out_dir) + "/" + slug(key.province) + "_" + std::to_string(key.year) +
            ".graphml",
        xml);
  });
}

void run_metrics(const RunConfig& config, const std::string& out_dir) {
  const std::string input = communities_path(out_dir);
  require_file(input, "run 'detect' first to assign communities");
  ensure_dir(out_dir);

  const Dataset records = load_canonical(input, config);
  const auto groups = group_by_province_year(records);
  std::vector<IndicatorRow> rows(groups.size());
  parallel_for(groups.size(), worker_count(config), [&](std::size_t i) {
    const auto& [key, indices] = groups[i];
    rows[i] = compute_indicator_row(records, indices, key.province, key.year,
                                    config.regression.acc_normalized);
  });

  csv::Writer w;
  w.comment(config.meta_line());
  w.row({"province", "year", "hhi", "cgc", "ccd", "acc", "n_nodes", "n_edges",
         "n_communities", "n_components"});
  for (const auto& row : rows) {
    w.row({row.province, std::to_string(row.year), csv::format_double(row.hhi),
           opt_field(row.cgc), csv::format_double(row.ccd), csv::format_double(row.acc),
           std::to_string(row.n_nodes), std::to_string(row.n_edges),
           std::to_string(row.n_communities), std::to_string(row.n_components)});
  }
  csv::write_text_file(indicators_path(out_dir), w.str());

  // descending rank tables, one per metric
  struct Metric {
    const char* name;
    std::function<std::optional<double>(const IndicatorRow&)> get;
  };
  const std::vector<Metric> metrics = {
      {"hhi", [](const IndicatorRow& r) { return std::optional<double>(r.hhi); }},
      {"cgc", [](const IndicatorRow& r) { return r.cgc; }},
      {"ccd", [](const IndicatorRow& r) { return std::optional<double>(r.ccd); }},
      {"acc", [](const IndicatorRow& r) { return std::optional<double>(r.acc); }},
  };
  for (const auto& metric : metrics) {
    std::vector<const IndicatorRow*> ranked;
    for (const auto& row : rows) {
      if (metric.get(row)) ranked.push_back(&row);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](const IndicatorRow* a, const IndicatorRow* b) {
                       return *metric.get(*a) > *metric.get(*b);
                     });
    csv::Writer rank_writer;
    rank_writer.comment(config.meta_line());
    rank_writer.row({"rank", "province", "year", metric.name});
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      rank_writer.row({std::to_string(i + 1), ranked[i]->province,
                       std::to_string(ranked[i]->year),
                       csv::format_double(*metric.get(*ranked[i]))});
    }
    csv::write_text_file(out_dir + "/ranks_" + metric.name + ".csv", rank_writer.str());
  }
}

void run_party(const RunConfig& config, const std::string& out_dir) {
  const std::string input = communities_path(out_dir);
  require_file(input, "run 'detect' first to assign communities");
  ensure_dir(out_dir);

  const Dataset records = load_canonical(input, config);

  const auto cells = hopping_rates(records, config.election_years);
  csv::Writer hopping;
  hopping.comment(config.meta_line());
  hopping.row({"province", "year", "group", "hoppers", "eligible", "rate"});
  for (const auto& cell : cells) {
    hopping.row({cell.province, std::to_string(cell.year),
                 std::string(group_token(cell.group)), std::to_string(cell.hoppers),
                 std::to_string(cell.eligible), opt_field(cell.rate)});
  }
  csv::write_text_file(out_dir + "/hopping_rates.csv", hopping.str());

  const auto overlaps =
      dynasty_party_overlap(records, config.regression.overlap_size_weighted);
  csv::Writer overlap_writer;
  overlap_writer.comment(config.meta_line());
  overlap_writer.row({"province", "year", "mean_overlap", "n_communities"});
  for (const auto& row : overlaps) {
    overlap_writer.row({row.province, std::to_string(row.year),
                        opt_field(row.mean_overlap), std::to_string(row.n_communities)});
  }
  csv::write_text_file(out_dir + "/overlap.csv", overlap_writer.str());

  const auto bandwagon = bandwagon_rates(records, config.major_party_map);
  csv::Writer bw;
  bw.comment(config.meta_line());
  bw.row({"year", "group", "numerator", "denominator", "rate"});
  for (const auto& row : bandwagon) {
    bw.row({std::to_string(row.year), std::string(group_token(row.group)),
            std::to_string(row.numerator), std::to_string(row.denominator),
            opt_field(row.rate)});
  }
  csv::write_text_file(out_dir + "/bandwagon.csv", bw.str());

  const auto membership = party_membership_table(records, config.major_parties);
  csv::Writer mem;
  mem.comment(config.meta_line());
  mem.row({"party", "year", "group", "count"});
  for (const auto& row : membership) {
    mem.row({row.party, std::to_string(row.year), std::string(group_token(row.group)),
             std::to_string(row.count)});
  }
  csv::write_text_file(out_dir + "/party_membership.csv", mem.str());

  // paired dynastic vs non-dynastic hopping rates feed the signed-rank test
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i + 1 < cells.size(); i += 2) {
    const auto& dyn = cells[i];
    const auto& non = cells[i + 1];
    if (dyn.rate && non.rate) pairs.emplace_back(*dyn.rate, *non.rate);
  }
  json summary;
  {
    json share = json::object();
    for (const auto& [year, value] : dynastic_share_by_year(records)) {
      share[std::to_string(year)] = value;
    }
    summary["dynastic_share"] = share;
  }
  summary["n_pairs"] = pairs.size();
  auto test_to_json = [](const TestResult& t) {
    return json{{"statistic", t.statistic},
                {"p_value", t.p_value},
                {"n", t.n},
                {"method", std::string(p_method_token(t.method))},
                {"alternative", std::string(alternative_token(t.alternative))}};
  };
  try {
    summary["wilcoxon_greater"] = test_to_json(wilcoxon_signed_rank(
        pairs, Alternative::Greater, config.regression.exact_wilcoxon_cutoff));
    summary["wilcoxon_two_sided"] = test_to_json(wilcoxon_signed_rank(
        pairs, Alternative::TwoSided, config.regression.exact_wilcoxon_cutoff));
  } catch (const std::exception& e) {
    summary["wilcoxon_error"] = e.what();
  }
  try {
    std::vector<double> differences;
    differences.reserve(pairs.size());
    for (const auto& [a, b] : pairs) differences.push_back(a - b);
    summary["shapiro_differences"] = test_to_json(shapiro_wilk(differences));
  } catch (const std::exception& e) {
    summary["shapiro_error"] = e.what();
  }
  write_json(out_dir + "/party_summary.json", summary, config);
}

void run_trend(const RunConfig& config, const std::string& out_dir) {
  const std::string input = indicators_path(out_dir);
  require_file(input, "run 'metrics' first");
  const auto rows = read_indicators_csv(input);

  json metrics = json::object();
  const bool use_yearly_means = config.regression.trend_granularity == "yearly_means";
  auto run_metric = [&](const char* name, auto getter) {
    std::vector<std::pair<int, double>> obs;
    for (const auto& row : rows) {
      if (auto value = getter(row)) obs.emplace_back(row.year, *value);
    }
    if (use_yearly_means) obs = yearly_means(obs);
    try {
      const TrendResult trend = linear_trend(obs);
      metrics[name] = {{"slope", trend.slope},
                       {"intercept", trend.intercept},
                       {"p_value", trend.p_value},
                       {"r2", trend.r2},
                       {"slope_per_cycle", trend.slope_per_cycle},
                       {"n", trend.n}};
    } catch (const std::exception& e) {
      metrics[name] = {{"error", e.what()}};
    }
  };
  run_metric("hhi", [](const IndicatorRow& r) { return std::optional<double>(r.hhi); });
  run_metric("cgc", [](const IndicatorRow& r) { return r.cgc; });
  run_metric("ccd", [](const IndicatorRow& r) { return std::optional<double>(r.ccd); });
  run_metric("acc", [](const IndicatorRow& r) { return std::optional<double>(r.acc); });

  write_json(out_dir + "/trend.json",
             json{{"granularity", use_yearly_means ? "yearly_means" : "pooled"},
                  {"metrics", metrics}},
             config);
}

void run_regress(const RunConfig& config, const std::string& out_dir) {
  const std::string ind_path = indicators_path(out_dir);
  require_file(ind_path, "run 'metrics' first");
  const std::string socio_path = resolve_socio_path(config, out_dir);
  require_file(socio_path, "socio table");
  ensure_dir(out_dir + "/qq");

  const auto indicators = read_indicators_csv(ind_path);
  const auto socio = read_socio_csv(socio_path);
  const PanelFrame frame =
      build_panel(indicators, socio, config.regression.first_year,
                  config.regression.last_year, config.regression.lag_years,
                  config.regression.log_base);

  csv::Writer panel_writer;
  panel_writer.comment(config.meta_line());
  panel_writer.row({"province", "year", "acc", "ccd", "cgc", "log_hhi", "pov", "hdi",
                    "pov_lag_3year", "hdi_lag_3year"});
  for (const auto& row : frame.rows) {
    panel_writer.row({row.province, std::to_string(row.year), opt_field(row.acc),
                      opt_field(row.ccd), opt_field(row.cgc), opt_field(row.log_hhi),
                      opt_field(row.pov), opt_field(row.hdi),
                      opt_field(row.pov_lag_3year), opt_field(row.hdi_lag_3year)});
  }
  csv::write_text_file(out_dir + "/panel.csv", panel_writer.str());

  // multicollinearity check over the eight regression columns
  csv::Writer vif_writer;
  vif_writer.comment(config.meta_line());
  vif_writer.row({"variable", "vif", "flag"});
  try {
    const auto factors =
        vif(frame, {"pov", "hdi", "acc", "ccd", "log_hhi", "cgc", "pov_lag_3year",
                    "hdi_lag_3year"});
    for (const auto& [name, value] : factors) {
      vif_writer.row({name, csv::format_double(value), value >= 5.0 ? "high" : "ok"});
    }
  } catch (const std::exception& e) {
    vif_writer.row({"error", e.what(), ""});
  }
  csv::write_text_file(out_dir + "/vif.csv", vif_writer.str());

  LmmOptions options;
  options.reml = config.regression.reml;

  const auto direction1 = run_direction1(frame, options);
  const auto direction2 = run_direction2(frame, options);

  auto cells_to_json = [&](const std::vector<DirectionCell>& cells) {
    json out = json::array();
    for (const auto& cell : cells) {
      out.push_back({{"response", cell.response},
                     {"socio_family", cell.socio_family},
                     {"ols", fit_to_json(cell.ols)},
                     {"fe", fit_to_json(cell.fe)},
                     {"lmm", fit_to_json(cell.lmm)}});
    }
    return out;
  };
  write_json(out_dir + "/direction1.json", json{{"cells", cells_to_json(direction1)}},
             config);
  write_json(out_dir + "/direction2.json", json{{"cells", cells_to_json(direction2)}},
             config);

  auto write_comparison = [&](const std::string& path,
                              const std::vector<DirectionCell>& cells) {
    csv::Writer w;
    w.comment(config.meta_line());
    w.row({"response", "socio_family", "model", "n_obs", "r2", "marginal_r2",
           "conditional_r2", "log_likelihood", "aic", "error"});
    for (const auto& cell : cells) {
      const std::pair<const char*, const FitOutcome*> outcomes[] = {
          {"ols", &cell.ols}, {"fe", &cell.fe}, {"lmm", &cell.lmm}};
      for (const auto& [model, outcome] : outcomes) {
        if (outcome->fit) {
          const FitResult& fit = *outcome->fit;
          const bool lmm = fit.model == "lmm";
          w.row({cell.response, cell.socio_family, model, std::to_string(fit.n_obs),
                 lmm ? "" : csv::format_double(fit.r2),
                 lmm ? csv::format_double(fit.marginal_r2) : "",
                 lmm ? csv::format_double(fit.conditional_r2) : "",
                 csv::format_double(fit.log_likelihood), csv::format_double(fit.aic),
                 ""});
        } else {
          w.row({cell.response, cell.socio_family, model, "", "", "", "", "", "",
                 outcome->error});
        }
      }
    }
    csv::write_text_file(path, w.str());
  };
  write_comparison(out_dir + "/comparison_direction1.csv", direction1);
  write_comparison(out_dir + "/comparison_direction2.csv", direction2);

  auto write_qq = [&](const std::string& tag, const DirectionCell& cell) {
    const std::pair<const char*, const FitOutcome*> outcomes[] = {
        {"ols", &cell.ols}, {"fe", &cell.fe}, {"lmm", &cell.lmm}};
    for (const auto& [model, outcome] : outcomes) {
      if (!outcome->fit) continue;
      csv::Writer w;
      w.comment(config.meta_line());
      w.row({"theoretical", "empirical"});
      for (const auto& [theoretical, empirical] : qq_residuals(*outcome->fit)) {
        w.row({csv::format_double(theoretical), csv::format_double(empirical)});
      }
      std::string name = tag + "_" + model + "_" + cell.response;
      if (!cell.socio_family.empty()) name += "_" + cell.socio_family;
      csv::write_text_file(out_dir + "/qq/" + name + ".csv", w.str());
    }
  };
  for (const auto& cell : direction1) write_qq("d1", cell);
  for (const auto& cell : direction2) write_qq("d2", cell);
}

void run_report(const RunConfig& config, const std::string& out_dir) {
  const std::string ind_path = indicators_path(out_dir);
  require_file(ind_path, "run 'metrics' first");
  require_file(out_dir + "/trend.json", "run 'trend' first");
  require_file(out_dir + "/party_summary.json", "run 'party' first");
  require_file(out_dir + "/direction1.json", "run 'regress' first");
  require_file(out_dir + "/direction2.json", "run 'regress' first");

  const auto rows = read_indicators_csv(ind_path);
  json mean_by_year = json::object();
  {
    std::map<int, std::array<std::pair<double, int>, 4>> sums;
    for (const auto& row : rows) {
      auto& entry = sums[row.year];
      entry[0].first += row.hhi;
      entry[0].second += 1;
      if (row.cgc) {
        entry[1].first += *row.cgc;
        entry[1].second += 1;
      }
      entry[2].first += row.ccd;
      entry[2].second += 1;
      entry[3].first += row.acc;
      entry[3].second += 1;
    }
    const char* names[4] = {"hhi", "cgc", "ccd", "acc"};
    for (int m = 0; m < 4; ++m) {
      json per_year = json::object();
      for (const auto& [year, entry] : sums) {
        if (entry[static_cast<std::size_t>(m)].second > 0) {
          per_year[std::to_string(year)] = entry[static_cast<std::size_t>(m)].first /
                                           entry[static_cast<std::size_t>(m)].second;
        }
      }
      mean_by_year[names[m]] = per_year;
    }
  }

  auto load_stripped = [&](const std::string& path) {
    json j = json::parse(csv::read_text_file(path));
    j.erase("_meta");
    return j;
  };
  const json trend = load_stripped(out_dir + "/trend.json");
  const json party = load_stripped(out_dir + "/party_summary.json");
  const json d1 = load_stripped(out_dir + "/direction1.json");
  const json d2 = load_stripped(out_dir + "/direction2.json");

  json failures = json::array();
  for (const json* direction : {&d1, &d2}) {
    for (const auto& cell : direction->at("cells")) {
      for (const char* model : {"ols", "fe", "lmm"}) {
        if (cell.at(model).contains("error")) {
          failures.push_back(cell.at("response").get<std::string>() + "/" + model + ": " +
                             cell.at(model).at("error").get<std::string>());
        }
      }
    }
  }

  json report;
  report["indicators"] = {{"rows", rows.size()}, {"mean_by_year", mean_by_year}};
  report["trend"] = trend;
  report["party"] = party;
  report["regression"] = {{"direction1", d1.at("cells")}, {"direction2", d2.at("cells")}};
  report["failures"] = failures;
  write_json(out_dir + "/report.json", report, config);
}

} // namespace kinnet::pipeline
