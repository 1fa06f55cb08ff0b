// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo experiment harness: seeded trial generation, per-method
// max-min solves over an SNR grid, CSV/JSON/plot-data emission.
//
// Determinism contract: every (trial, snr, method) cell derives its random
// streams from the master seed by position, so records are bit-identical
// across runs, worker counts, and method subsets.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mcbeam/channel.hpp"
#include "mcbeam/codebook.hpp"
#include "mcbeam/hybrid.hpp"
#include "mcbeam/types.hpp"

namespace mcbeam {

enum class ChannelKind { rayleigh, geometric };
enum class SteeringSource { uniform_grid, user_aods };

enum class Method {
  digital_full,
  digital_subset,
  hybrid_exhaustive,
  hybrid_algorithm1,
  aod_aware,
};

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct ExperimentConfig {
  int num_antennas = 0;   // M
  int num_rf_chains = 0;  // N (also the digital_subset size)
  int num_users = 0;      // K
  ChannelKind channel_kind = ChannelKind::rayleigh;
  std::vector<int> path_counts;  // geometric channels only, length K
  double spacing_ratio = 0.5;
  RfCodebook::Kind codebook_kind = RfCodebook::Kind::dft;
  SteeringSource steering_source = SteeringSource::uniform_grid;
  std::vector<Method> methods;
  std::uint64_t search_size = 1;  // I, ranked-search depth
  std::vector<double> snr_grid_db;
  int trials = 1000;
  int n_candidates = kDefaultCandidates;
  std::uint64_t seed = 1;

  void validate() const;  // throws config_error
  std::uint64_t codebook_size() const;
  std::uint64_t exhaustive_size() const;  // C-choose-N

  static ExperimentConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  static ExperimentConfig preset(const std::string& name);  // fig1a|fig1b|fig1c
};

struct TrialRecord {
  int trial = 0;
  std::string method;
  double snr_db = 0.0;
  double t_achieved = 0.0;
  double rate_bps_hz = 0.0;
  double wall_time_s = 0.0;
  std::uint64_t solve_count = 0;
};

struct SolveFailure {
  int trial = 0;
  std::string method;
  double snr_db = 0.0;
  std::string message;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<SolveFailure> failures;
};

// Channel realization (and antenna subset) of one trial, reproducible from
// the config alone.
struct Realization {
  ChannelSet channels;
  SteeringInfo steering;     // empty for Rayleigh channels
  std::vector<int> subset;   // digital_subset antennas, fixed across SNR
};

Realization draw_realization(const ExperimentConfig& config, int trial);

// The codebook used by the hybrid methods at a given trial. Constant across
// trials except for per-realization kinds (eigen, steering from user AoDs).
RfCodebook build_codebook(const ExperimentConfig& config, const Realization& real);

ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 1);

struct SummaryPoint {
  std::string method;
  double snr_db = 0.0;
  int trials = 0;
  double mean_t_achieved = 0.0;
  double mean_rate_bps_hz = 0.0;
  double mean_wall_time_s = 0.0;
  double mean_solve_count = 0.0;
  std::array<double, 9> rate_deciles{};  // 10%..90%, interpolated
  std::vector<double> sorted_rates;
};

struct Summary {
  std::vector<std::string> methods;  // first-appearance order
  std::vector<double> snr_db;        // ascending
  std::vector<SummaryPoint> points;  // method-major, snr ascending
  std::vector<double> rate_grid;     // shared CDF support
};

Summary summarize(const std::vector<TrialRecord>& records);

// Linear-interpolation quantile of an ascending sample.
double quantile(const std::vector<double>& sorted, double p);

void write_records_csv(const std::vector<TrialRecord>& records, const std::string& path);
std::vector<TrialRecord> read_records_csv(const std::string& path);
void write_summary_json(const Summary& summary, const std::string& path);
void write_plot_data(const Summary& summary, const std::string& dir);

}  // namespace mcbeam
