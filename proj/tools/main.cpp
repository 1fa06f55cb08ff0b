// SPDX-License-Identifier: Apache-2.0
//
// Command line front end: `mcbeam run` executes a Monte Carlo experiment and
// writes records.csv, summary.json and plot data; `mcbeam summarize` rebuilds
// a summary from an existing records CSV.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mcbeam/experiment.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_command(const std::string& config_path, const std::string& preset,
                int trials, std::uint64_t seed, bool seed_set,
                const std::string& out_dir, int threads) {
  mcbeam::ExperimentConfig config;
  if (!config_path.empty() && !preset.empty()) {
    std::cerr << "error: pass either --config or --preset, not both\n";
    return 1;
  }
  if (!preset.empty()) {
    config = mcbeam::ExperimentConfig::preset(preset);
  } else if (!config_path.empty()) {
    config = mcbeam::ExperimentConfig::from_json_text(read_file(config_path));
  } else {
    std::cerr << "error: one of --config or --preset is required\n";
    return 1;
  }
  if (trials > 0) config.trials = trials;
  if (seed_set) config.seed = seed;
  config.validate();

  if (threads < 1)
    threads = std::max(1u, std::thread::hardware_concurrency());

  fs::create_directories(out_dir);
  std::ofstream(out_dir + "/config_used.json") << config.to_json_text();

  const mcbeam::ExperimentResult result = mcbeam::run_experiment(config, threads);
  mcbeam::write_records_csv(result.records, out_dir + "/records.csv");
  const mcbeam::Summary summary = mcbeam::summarize(result.records);
  mcbeam::write_summary_json(summary, out_dir + "/summary.json");
  mcbeam::write_plot_data(summary, out_dir);

  for (const mcbeam::SummaryPoint& pt : summary.points)
    std::cout << pt.method << " @ " << pt.snr_db
              << " dB: mean rate " << pt.mean_rate_bps_hz << " bps/Hz over "
              << pt.trials << " trials\n";
  std::cout << "wrote " << result.records.size() << " records to " << out_dir
            << "/records.csv\n";

  if (!result.failures.empty()) {
    std::ofstream fcsv(out_dir + "/failures.csv");
    fcsv << "trial,method,snr_db,message\n";
    std::cerr << result.failures.size() << " record(s) failed:\n";
    for (const mcbeam::SolveFailure& fail : result.failures) {
      std::cerr << "  trial " << fail.trial << " " << fail.method << " @ "
                << fail.snr_db << " dB: " << fail.message << "\n";
      std::string msg = fail.message;
      for (char& c : msg)
        if (c == ',' || c == '\n') c = ';';
      fcsv << fail.trial << ',' << fail.method << ',' << fail.snr_db << ','
           << msg << '\n';
    }
    return 2;
  }
  return 0;
}

int summarize_command(const std::string& in_csv, const std::string& out_json) {
  const std::vector<mcbeam::TrialRecord> records = mcbeam::read_records_csv(in_csv);
  const mcbeam::Summary summary = mcbeam::summarize(records);
  const fs::path parent = fs::path(out_json).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  mcbeam::write_summary_json(summary, out_json);
  std::cout << "wrote " << out_json << " (" << summary.points.size()
            << " summary points)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"max-min multicast beamforming experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a Monte Carlo experiment");
  std::string config_path, preset, out_dir = ".";
  int trials = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--preset", preset, "built-in config: fig1a, fig1b or fig1c");
  run->add_option("--trials", trials, "override the trial count");
  auto* seed_opt = run->add_option("--seed", seed, "override the master seed");
  run->add_option("--out", out_dir, "output directory (default: current)");
  run->add_option("--threads", threads, "worker threads, 0 = all hardware threads");

  auto* summ = app.add_subcommand("summarize", "summarize an existing records CSV");
  std::string in_csv, out_json;
  summ->add_option("--in", in_csv, "records CSV produced by run")->required();
  summ->add_option("--out", out_json, "summary JSON to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;  // help exits 0, usage errors 1
  }

  try {
    if (run->parsed())
      return run_command(config_path, preset, trials, seed,
                         seed_opt->count() > 0, out_dir, threads);
    return summarize_command(in_csv, out_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
