#include "kinnet/pipeline.hpp"
#include "kinnet/run_config.hpp"
#include "kinnet/version.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <string>

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_dir = "out";
  int workers = -1;
  double gamma = -1.0;
  long long seed = -1;
  double threshold = -1.0;
};

kinnet::RunConfig load_config(const GlobalArgs& args) {
  kinnet::RunConfig config;
  if (!args.config_path.empty()) {
    config = kinnet::RunConfig::load(args.config_path);
  }
  if (args.workers >= 0) config.workers = args.workers;
  if (args.gamma > 0.0) config.leiden.gamma = args.gamma;
  if (args.seed >= 0) {
    config.leiden.seed = static_cast<std::uint64_t>(args.seed);
    config.synth.seed = static_cast<std::uint64_t>(args.seed);
  }
  if (args.threshold >= 0.0) config.linkage.threshold = args.threshold;
  return config;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinnet: provincial political-kinship networks, dynastic "
               "indicators, and panel analysis"};
  app.set_version_flag("--version",
                       std::string(kinnet::kToolName) + " " +
                           std::string(kinnet::kToolVersion));
  app.require_subcommand(1);

  GlobalArgs args;
  app.add_option("--config", args.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  app.add_option("--out", args.out_dir, "output directory (default: out)");
  app.add_option("--workers", args.workers, "worker threads (0 = all cores)");

  using Stage = std::function<void(const kinnet::RunConfig&, const std::string&)>;
  struct Command {
    const char* name;
    const char* help;
    Stage stage;
  };
  const std::vector<Command> commands = {
      {"ingest", "parse, link and normalize raw election files into the canonical CSV",
       kinnet::pipeline::run_ingest},
      {"simulate", "generate a seeded synthetic election panel with ground truth",
       kinnet::pipeline::run_simulate},
      {"detect", "run Leiden community detection and assign community/dynastic flags",
       kinnet::pipeline::run_detect},
      {"graph", "export one GraphML file per (province, year)",
       kinnet::pipeline::run_graph},
      {"metrics", "compute HHI, CGC, CCD and ACC per (province, year)",
       kinnet::pipeline::run_metrics},
      {"party", "party hopping, overlap, bandwagoning and the signed-rank test",
       kinnet::pipeline::run_party},
      {"trend", "linear trend analysis over the indicator panel",
       kinnet::pipeline::run_trend},
      {"regress", "panel build, VIF, OLS/FE/LMM for both directions",
       kinnet::pipeline::run_regress},
      {"report", "assemble the single run summary from stage outputs",
       kinnet::pipeline::run_report},
  };

  std::vector<CLI::App*> subs;
  for (const auto& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    if (std::string(command.name) == "detect") {
      sub->add_option("--gamma", args.gamma, "Leiden resolution (default 1.0)");
      sub->add_option("--seed", args.seed, "random seed override");
    }
    if (std::string(command.name) == "simulate") {
      sub->add_option("--seed", args.seed, "random seed override");
    }
    if (std::string(command.name) == "ingest") {
      sub->add_option("--threshold", args.threshold,
                      "record-linkage similarity threshold (default 0.90)");
    }
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const kinnet::RunConfig config = load_config(args);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (subs[i]->parsed()) {
        commands[i].stage(config, args.out_dir);
        return 0;
      }
    }
  } catch (const kinnet::pipeline::MissingInput& e) {
    std::cerr << "kinnet: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "kinnet: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
