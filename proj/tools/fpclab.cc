// fpclab command-line runner.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fpclab/error.h"
#include "fpclab/experiments.h"

namespace {

constexpr int kExitFailedBounds = 1;
constexpr int kExitError = 2;

void print_checks(const fpclab::ExperimentReport& report) {
  for (const auto& c : report.checks) {
    std::printf("  %-4s %-36s %.6g %s %.6g  (%s)\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.statistic,
                c.relation.c_str(), c.bound, c.detail.c_str());
  }
}

std::string stem_for(const fpclab::ExperimentConfig& cfg) {
  return cfg.name.empty() ? std::string(fpclab::experiment_kind_name(cfg.kind)) : cfg.name;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      grid.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw fpclab::Error(fpclab::ErrorKind::kConfigInvalid, "grid: '" + item + "' is not a code length");
    }
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpclab: fingerprinting-code reidentification experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int threads = 0;
  std::string grid_text = "16,32,64";

  auto* run = app.add_subcommand("run", "Run one experiment campaign");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_dir, "Output directory (default: config 'output' or fpclab-out)");
  run->add_option("--threads", threads, "OpenMP threads (0 = default)");

  auto* sweep = app.add_subcommand("sweep", "Run reid-attack across code lengths");
  sweep->add_option("--config", config_path, "Base config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--grid", grid_text, "Comma-separated code lengths")->capture_default_str();
  sweep->add_option("--seed", seed, "Override the config seed");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--threads", threads, "OpenMP threads (0 = default)");

  auto* validate = app.add_subcommand("validate-config", "Check a config and print it with defaults filled in");
  validate->add_option("path", config_path, "Experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    fpclab::ExperimentConfig cfg = fpclab::load_config(config_path);
    if (validate->parsed()) {
      std::cout << fpclab::config_to_json(cfg).dump(2) << "\n";
      return 0;
    }
    if (seed) cfg.seed = *seed;
    const std::filesystem::path dir = !out_dir.empty() ? out_dir : cfg.output.value_or("fpclab-out");
    fpclab::RunOptions options;
    options.threads = threads;

    if (run->parsed()) {
      const auto report = fpclab::run_experiment(cfg, options);
      fpclab::write_report(report, dir, stem_for(cfg));
      std::printf("%s: %s (%zu trials, %.2f s) -> %s\n", stem_for(cfg).c_str(), report.passed ? "PASS" : "FAIL",
                  report.completed_trials, report.seconds, (dir / (stem_for(cfg) + ".json")).c_str());
      print_checks(report);
      return report.passed ? 0 : kExitFailedBounds;
    }

    const auto result = fpclab::scaling_sweep(cfg, parse_grid(grid_text), options);
    for (const auto& report : result.reports) fpclab::write_report(report, dir, stem_for(report.config));
    const std::string stem = cfg.name.empty() ? std::string("sweep") : cfg.name;
    {
      std::ofstream json(dir / (stem + ".sweep.json"));
      json << result.summary.dump(2) << "\n";
      std::ofstream csv(dir / (stem + ".sweep.csv"));
      csv << result.summary_csv;
    }
    std::cout << result.summary_csv;
    return 0;
  } catch (const fpclab::Error& e) {
    std::cerr << "fpclab: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fpclab: %s\n", e.what());
    return kExitError;
  }
}
