#pragma once

#include "kinnet/run_config.hpp"

#include <stdexcept>
#include <string>

namespace kinnet::pipeline {

/// A prerequisite stage output is missing; the message names it and the
/// command that produces it.
struct MissingInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stage output paths under an output directory.
std::string canonical_path(const std::string& out_dir);
std::string communities_path(const std::string& out_dir);
std::string partitions_path(const std::string& out_dir);
std::string indicators_path(const std::string& out_dir);
std::string socio_output_path(const std::string& out_dir);
std::string graphs_dir(const std::string& out_dir);

/// Each stage reads its prerequisites from `out_dir` (or config inputs),
/// writes its artifacts back under `out_dir`, and is a pure function of
/// (inputs, config): reruns are byte-identical.
void run_ingest(const RunConfig& config, const std::string& out_dir);
void run_simulate(const RunConfig& config, const std::string& out_dir);
void run_detect(const RunConfig& config, const std::string& out_dir);
void run_graph(const RunConfig& config, const std::string& out_dir);
void run_metrics(const RunConfig& config, const std::string& out_dir);
void run_party(const RunConfig& config, const std::string& out_dir);
void run_trend(const RunConfig& config, const std::string& out_dir);
void run_regress(const RunConfig& config, const std::string& out_dir);
void run_report(const RunConfig& config, const std::string& out_dir);

} // namespace kinnet::pipeline
