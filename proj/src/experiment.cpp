// SPDX-License-Identifier: Apache-2.0

#include "mcbeam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace mcbeam {

namespace {

constexpr const char* kCsvHeader =
    "trial,method,snr_db,t_achieved,rate_bps_hz,wall_time_s,solve_count";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Streams shared by related methods on purpose: digital_full and
// digital_subset see the same solve stream (so subset == full array when
// N = M), and both hybrid searches share one stream (so the ranked search at
// full depth reproduces the exhaustive search bit for bit).
int solve_slot(Method m) {
  switch (m) {
    case Method::digital_full:
    case Method::digital_subset:
      return 0;
    case Method::hybrid_exhaustive:
    case Method::hybrid_algorithm1:
      return 1;
    case Method::aod_aware:
      return 2;
  }
  throw config_error("unknown method");
}

std::uint64_t solve_stream(int snr_index, int slot) {
  return 8 + 4 * static_cast<std::uint64_t>(snr_index) + slot;
}

bool is_hybrid(Method m) {
  return m == Method::hybrid_exhaustive || m == Method::hybrid_algorithm1;
}

void run_trial(const ExperimentConfig& config, int trial,
               const RfCodebook* shared_codebook,
               std::vector<TrialRecord>& records,
               std::vector<SolveFailure>& failures) {
  const Realization real = draw_realization(config, trial);

  bool needs_codebook = false;
  for (Method m : config.methods) needs_codebook = needs_codebook || is_hybrid(m);
  RfCodebook local;
  const RfCodebook* codebook = shared_codebook;
  if (needs_codebook && codebook == nullptr) {
    local = build_codebook(config, real);
    codebook = &local;
  }

  const std::uint64_t trial_seed = derive_seed(config.seed, trial);
  const std::vector<CVec> full = real.channels.columns();

  for (std::size_t si = 0; si < config.snr_grid_db.size(); ++si) {
    const double snr_db = config.snr_grid_db[si];
    const double power = std::pow(10.0, snr_db / 10.0);
    for (Method m : config.methods) {
      Rng rng(derive_seed(trial_seed,
                          solve_stream(static_cast<int>(si), solve_slot(m))));
      const auto start = std::chrono::steady_clock::now();
      try {
        double t = 0.0;
        std::uint64_t solves = 1;
        switch (m) {
          case Method::digital_full:
            t = solve_maxmin(MaxMinProblem::standard(full, power),
                             config.n_candidates, rng)
                    .t_achieved;
            break;
          case Method::digital_subset:
            t = subset_digital(real.channels, real.subset, power,
                               config.n_candidates, rng)
                    .t_achieved;
            break;
          case Method::hybrid_exhaustive:
            t = exhaustive_search(*codebook, config.num_rf_chains,
                                  real.channels, power, config.n_candidates, rng)
                    .t_achieved;
            solves = config.exhaustive_size();
            break;
          case Method::hybrid_algorithm1:
            t = ranked_search(*codebook, config.num_rf_chains, config.search_size,
                              real.channels, power, config.n_candidates, rng)
                    .t_achieved;
            solves = config.search_size;
            break;
          case Method::aod_aware:
            t = aod_aware_precoder(real.steering, real.channels, power,
                                   config.n_candidates, rng)
                    .t_achieved;
            break;
        }
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        records.push_back({trial, to_string(m), snr_db, t, std::log2(1.0 + t),
                           wall, solves});
      } catch (const solver_error& e) {
        failures.push_back({trial, to_string(m), snr_db, e.what()});
      } catch (const degenerate_error& e) {
        failures.push_back({trial, to_string(m), snr_db, e.what()});
      } catch (const precondition_error& e) {
        failures.push_back({trial, to_string(m), snr_db, e.what()});
      } catch (const not_applicable_error& e) {
        failures.push_back({trial, to_string(m), snr_db, e.what()});
      }
    }
  }
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::digital_full: return "digital_full";
    case Method::digital_subset: return "digital_subset";
    case Method::hybrid_exhaustive: return "hybrid_exhaustive";
    case Method::hybrid_algorithm1: return "hybrid_algorithm1";
    case Method::aod_aware: return "aod_aware";
  }
  throw config_error("unknown method");
}

Method method_from_string(const std::string& s) {
  if (s == "digital_full") return Method::digital_full;
  if (s == "digital_subset") return Method::digital_subset;
  if (s == "hybrid_exhaustive") return Method::hybrid_exhaustive;
  if (s == "hybrid_algorithm1") return Method::hybrid_algorithm1;
  if (s == "aod_aware") return Method::aod_aware;
  throw config_error("unknown method: " + s);
}

std::uint64_t ExperimentConfig::codebook_size() const {
  switch (codebook_kind) {
    case RfCodebook::Kind::dft:
      return num_antennas;
    case RfCodebook::Kind::steering:
      if (steering_source == SteeringSource::user_aods) {
        std::uint64_t total = 0;
        for (int l : path_counts) total += l;
        return total;
      }
      return num_antennas;
    case RfCodebook::Kind::eigen:
      return num_users;
  }
  throw config_error("unknown codebook kind");
}

std::uint64_t ExperimentConfig::exhaustive_size() const {
  return selection_count(static_cast<int>(codebook_size()), num_rf_chains);
}

void ExperimentConfig::validate() const {
  if (num_antennas < 1 || num_rf_chains < 1 || num_users < 1)
    throw config_error("M, N, K must all be >= 1");
  if (num_rf_chains > num_antennas)
    throw config_error("N must not exceed M");
  if (channel_kind == ChannelKind::rayleigh) {
    if (num_users > num_antennas)
      throw config_error("rayleigh channels require K <= M");
    if (!path_counts.empty())
      throw config_error("path_counts only applies to geometric channels");
  } else {
    if (static_cast<int>(path_counts.size()) != num_users)
      throw config_error("geometric channels need one path count per user");
    for (int l : path_counts)
      if (l < 1) throw config_error("every path count must be >= 1");
  }
  if (!(spacing_ratio > 0.0)) throw config_error("spacing_ratio must be positive");
  if (methods.empty()) throw config_error("no methods selected");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j]) throw config_error("duplicate method");
  if (snr_grid_db.empty()) throw config_error("empty SNR grid");
  for (double v : snr_grid_db)
    if (!std::isfinite(v)) throw config_error("non-finite SNR value");
  if (trials < 1) throw config_error("trials must be >= 1");
  if (n_candidates < 1) throw config_error("n_candidates must be >= 1");

  bool any_hybrid = false;
  for (Method m : methods) {
    any_hybrid = any_hybrid || is_hybrid(m);
    if (m == Method::aod_aware) {
      if (channel_kind != ChannelKind::geometric)
        throw config_error("aod_aware requires geometric channels");
      int total = 0;
      for (int l : path_counts) total += l;
      if (total > num_antennas)
        throw config_error("aod_aware requires total path count <= M");
    }
  }
  if (any_hybrid) {
    if (codebook_kind == RfCodebook::Kind::eigen &&
        channel_kind != ChannelKind::geometric)
      throw config_error("eigen codebook requires geometric channels");
    if (codebook_kind == RfCodebook::Kind::steering &&
        steering_source == SteeringSource::user_aods &&
        channel_kind != ChannelKind::geometric)
      throw config_error("user-AoD steering codebook requires geometric channels");
    if (codebook_size() < static_cast<std::uint64_t>(num_rf_chains))
      throw config_error("codebook smaller than the RF chain count");
    bool ranked = false;
    for (Method m : methods) ranked = ranked || m == Method::hybrid_algorithm1;
    if (ranked && (search_size < 1 || search_size > exhaustive_size()))
      throw config_error("search depth I out of range");
  }
  if (steering_source == SteeringSource::user_aods &&
      codebook_kind != RfCodebook::Kind::steering)
    throw config_error("steering_source applies to steering codebooks only");
}

namespace {

const std::map<std::string, ChannelKind> kChannelNames = {
    {"rayleigh", ChannelKind::rayleigh}, {"geometric", ChannelKind::geometric}};
const std::map<std::string, RfCodebook::Kind> kCodebookNames = {
    {"dft", RfCodebook::Kind::dft},
    {"steering", RfCodebook::Kind::steering},
    {"eigen", RfCodebook::Kind::eigen}};
const std::map<std::string, SteeringSource> kSteeringSources = {
    {"uniform_grid", SteeringSource::uniform_grid},
    {"user_aods", SteeringSource::user_aods}};

template <typename T>
T named(const std::map<std::string, T>& names, const std::string& s,
        const char* what) {
  const auto it = names.find(s);
  if (it == names.end()) throw config_error(std::string("unknown ") + what + ": " + s);
  return it->second;
}

template <typename T>
std::string name_of(const std::map<std::string, T>& names, T v) {
  for (const auto& [k, val] : names)
    if (val == v) return k;
  throw config_error("unnamed enum value");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config parse: ") + e.what());
  }
  static const std::vector<std::string> known = {
      "M", "N", "K", "channel_kind", "path_counts", "spacing_ratio",
      "codebook_kind", "steering_source", "methods", "I", "snr_grid_db",
      "trials", "n_candidates", "seed"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw config_error("unknown config key: " + key);
  }
  ExperimentConfig c;
  try {
    c.num_antennas = j.value("M", 0);
    c.num_rf_chains = j.value("N", 0);
    c.num_users = j.value("K", 0);
    c.channel_kind = named(kChannelNames, j.value("channel_kind", "rayleigh"), "channel kind");
    c.path_counts = j.value("path_counts", std::vector<int>{});
    c.spacing_ratio = j.value("spacing_ratio", 0.5);
    c.codebook_kind = named(kCodebookNames, j.value("codebook_kind", "dft"), "codebook kind");
    c.steering_source = named(kSteeringSources, j.value("steering_source", "uniform_grid"),
                              "steering source");
    c.methods.clear();
    for (const auto& s : j.value("methods", std::vector<std::string>{}))
      c.methods.push_back(method_from_string(s));
    c.search_size = j.value("I", std::uint64_t{1});
    c.snr_grid_db = j.value("snr_grid_db", std::vector<double>{});
    c.trials = j.value("trials", 1000);
    c.n_candidates = j.value("n_candidates", kDefaultCandidates);
    c.seed = j.value("seed", std::uint64_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config field: ") + e.what());
  }
  return c;
}

std::string ExperimentConfig::to_json_text() const {
  nlohmann::json j;
  j["M"] = num_antennas;
  j["N"] = num_rf_chains;
  j["K"] = num_users;
  j["channel_kind"] = name_of(kChannelNames, channel_kind);
  if (!path_counts.empty()) j["path_counts"] = path_counts;
  j["spacing_ratio"] = spacing_ratio;
  j["codebook_kind"] = name_of(kCodebookNames, codebook_kind);
  j["steering_source"] = name_of(kSteeringSources, steering_source);
  std::vector<std::string> names;
  for (Method m : methods) names.push_back(to_string(m));
  j["methods"] = names;
  j["I"] = search_size;
  j["snr_grid_db"] = snr_grid_db;
  j["trials"] = trials;
  j["n_candidates"] = n_candidates;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "fig1a") {
    c.num_antennas = 6;
    c.num_rf_chains = 2;
    c.num_users = 2;
    c.methods = {Method::digital_full, Method::digital_subset,
                 Method::hybrid_exhaustive, Method::hybrid_algorithm1};
    c.search_size = 1;
    c.snr_grid_db = {-5, 0, 5, 10, 15, 20};
    c.seed = 1;
  } else if (name == "fig1b") {
    c.num_antennas = 8;
    c.num_rf_chains = 3;
    c.num_users = 3;
    c.methods = {Method::digital_full, Method::digital_subset,
                 Method::hybrid_exhaustive, Method::hybrid_algorithm1};
    c.search_size = 4;
    c.snr_grid_db = {10};
    c.seed = 2;
  } else if (name == "fig1c") {
    c.num_antennas = 10;
    c.num_rf_chains = 3;
    c.num_users = 3;
    c.channel_kind = ChannelKind::geometric;
    c.path_counts = {1, 1, 1};
    c.methods = {Method::digital_full, Method::hybrid_algorithm1, Method::aod_aware};
    c.search_size = 1;
    c.snr_grid_db = {0, 5, 10, 15, 20};
    c.seed = 3;
  } else {
    throw config_error("unknown preset: " + name);
  }
  return c;
}

Realization draw_realization(const ExperimentConfig& config, int trial) {
  const std::uint64_t trial_seed = derive_seed(config.seed, trial);
  Rng channel_rng(derive_seed(trial_seed, 0));
  Rng subset_rng(derive_seed(trial_seed, 1));

  Realization real;
  if (config.channel_kind == ChannelKind::rayleigh) {
    real.channels = gen_rayleigh(config.num_antennas, config.num_users, channel_rng);
  } else {
    auto [set, info] = gen_geometric(config.num_antennas, config.num_users,
                                     config.path_counts, config.spacing_ratio,
                                     channel_rng);
    real.channels = std::move(set);
    real.steering = std::move(info);
  }
  real.subset = subset_rng.sample_indices(config.num_antennas, config.num_rf_chains);
  return real;
}

RfCodebook build_codebook(const ExperimentConfig& config, const Realization& real) {
  switch (config.codebook_kind) {
    case RfCodebook::Kind::dft:
      return dft_codebook(config.num_antennas);
    case RfCodebook::Kind::steering: {
      std::vector<double> aods;
      if (config.steering_source == SteeringSource::user_aods) {
        for (const UserPaths& u : real.steering.users)
          for (Eigen::Index l = 0; l < u.aods.size(); ++l) aods.push_back(u.aods[l]);
      } else {
        const int m = config.num_antennas;
        for (int i = 0; i < m; ++i)
          aods.push_back(std::acos(-1.0 + (2.0 * i + 1.0) / m));
      }
      return steering_codebook(config.num_antennas, aods, config.spacing_ratio);
    }
    case RfCodebook::Kind::eigen: {
      std::vector<CMat> covariances;
      for (const UserPaths& u : real.steering.users) {
        const double scale =
            static_cast<double>(config.num_antennas) / u.path_count();
        covariances.push_back(scale * (u.steering * u.steering.adjoint()));
      }
      return eigen_codebook(covariances);
    }
  }
  throw config_error("unknown codebook kind");
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();

  bool needs_codebook = false;
  for (Method m : config.methods) needs_codebook = needs_codebook || is_hybrid(m);
  const bool per_trial_codebook =
      config.codebook_kind == RfCodebook::Kind::eigen ||
      (config.codebook_kind == RfCodebook::Kind::steering &&
       config.steering_source == SteeringSource::user_aods);
  RfCodebook shared;
  const RfCodebook* shared_ptr = nullptr;
  if (needs_codebook && !per_trial_codebook) {
    shared = build_codebook(config, Realization{});
    shared_ptr = &shared;
  }

  std::vector<std::vector<TrialRecord>> rec_slots(config.trials);
  std::vector<std::vector<SolveFailure>> fail_slots(config.trials);

  std::atomic<int> next{0};
  std::mutex fatal_mutex;
  std::exception_ptr fatal;
  auto worker = [&]() {
    for (;;) {
      const int trial = next.fetch_add(1);
      if (trial >= config.trials) return;
      try {
        run_trial(config, trial, shared_ptr, rec_slots[trial], fail_slots[trial]);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, config.trials);
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentResult out;
  for (int trial = 0; trial < config.trials; ++trial) {
    out.records.insert(out.records.end(), rec_slots[trial].begin(), rec_slots[trial].end());
    out.failures.insert(out.failures.end(), fail_slots[trial].begin(), fail_slots[trial].end());
  }
  return out;
}

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw precondition_error("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw precondition_error("quantile: p outside [0, 1]");
  if (sorted.size() == 1) return sorted.front();
  const double h = p * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t i = static_cast<std::size_t>(std::min(
      std::floor(h), static_cast<double>(sorted.size()) - 2.0));
  const double frac = h - static_cast<double>(i);
  return sorted[i] * (1.0 - frac) + sorted[i + 1] * frac;
}

Summary summarize(const std::vector<TrialRecord>& records) {
  if (records.empty()) throw precondition_error("summarize: no records");

  Summary out;
  for (const TrialRecord& r : records) {
    if (std::find(out.methods.begin(), out.methods.end(), r.method) == out.methods.end())
      out.methods.push_back(r.method);
    if (std::find(out.snr_db.begin(), out.snr_db.end(), r.snr_db) == out.snr_db.end())
      out.snr_db.push_back(r.snr_db);
  }
  std::sort(out.snr_db.begin(), out.snr_db.end());

  double max_rate = 0.0;
  for (const std::string& method : out.methods) {
    for (double snr : out.snr_db) {
      SummaryPoint pt;
      pt.method = method;
      pt.snr_db = snr;
      for (const TrialRecord& r : records) {
        if (r.method != method || r.snr_db != snr) continue;
        pt.trials += 1;
        pt.mean_t_achieved += r.t_achieved;
        pt.mean_rate_bps_hz += r.rate_bps_hz;
        pt.mean_wall_time_s += r.wall_time_s;
        pt.mean_solve_count += static_cast<double>(r.solve_count);
        pt.sorted_rates.push_back(r.rate_bps_hz);
        max_rate = std::max(max_rate, r.rate_bps_hz);
      }
      if (pt.trials == 0) continue;
      pt.mean_t_achieved /= pt.trials;
      pt.mean_rate_bps_hz /= pt.trials;
      pt.mean_wall_time_s /= pt.trials;
      pt.mean_solve_count /= pt.trials;
      std::sort(pt.sorted_rates.begin(), pt.sorted_rates.end());
      for (int q = 1; q <= 9; ++q)
        pt.rate_deciles[q - 1] = quantile(pt.sorted_rates, q / 10.0);
      out.points.push_back(std::move(pt));
    }
  }

  const double top = max_rate > 0.0 ? max_rate : 1.0;
  out.rate_grid.resize(101);
  for (int i = 0; i <= 100; ++i) out.rate_grid[i] = top * i / 100.0;
  return out;
}

void write_records_csv(const std::vector<TrialRecord>& records, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << kCsvHeader << "\n";
  for (const TrialRecord& r : records) {
    f << r.trial << ',' << r.method << ',' << fmt_double(r.snr_db) << ','
      << fmt_double(r.t_achieved) << ',' << fmt_double(r.rate_bps_hz) << ','
      << fmt_double(r.wall_time_s) << ',' << r.solve_count << "\n";
  }
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<TrialRecord> read_records_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw precondition_error("cannot read " + path);
  std::string line;
  if (!std::getline(f, line) || line != kCsvHeader)
    throw precondition_error("bad records header in " + path);
  std::vector<TrialRecord> records;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::array<std::string, 7> fields;
    std::size_t pos = 0;
    for (int i = 0; i < 7; ++i) {
      const std::size_t comma = line.find(',', pos);
      if ((comma == std::string::npos) != (i == 6))
        throw precondition_error("bad records row in " + path);
      fields[i] = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      pos = comma + 1;
    }
    TrialRecord r;
    try {
      r.trial = std::stoi(fields[0]);
      r.method = fields[1];
      r.snr_db = std::stod(fields[2]);
      r.t_achieved = std::stod(fields[3]);
      r.rate_bps_hz = std::stod(fields[4]);
      r.wall_time_s = std::stod(fields[5]);
      r.solve_count = std::stoull(fields[6]);
    } catch (const std::exception&) {
      throw precondition_error("bad records row in " + path);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_summary_json(const Summary& summary, const std::string& path) {
  nlohmann::json j;
  j["methods"] = summary.methods;
  j["snr_db"] = summary.snr_db;
  nlohmann::json points = nlohmann::json::array();
  for (const SummaryPoint& pt : summary.points) {
    nlohmann::json p;
    p["method"] = pt.method;
    p["snr_db"] = pt.snr_db;
    p["trials"] = pt.trials;
    p["mean_t_achieved"] = pt.mean_t_achieved;
    p["mean_rate_bps_hz"] = pt.mean_rate_bps_hz;
    p["mean_wall_time_s"] = pt.mean_wall_time_s;
    p["mean_solve_count"] = pt.mean_solve_count;
    p["rate_deciles"] = pt.rate_deciles;
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);

  nlohmann::json curves = nlohmann::json::array();
  for (const SummaryPoint& pt : summary.points) {
    nlohmann::json c;
    c["method"] = pt.method;
    c["snr_db"] = pt.snr_db;
    std::vector<double> values;
    values.reserve(summary.rate_grid.size());
    for (double x : summary.rate_grid) {
      const auto it = std::upper_bound(pt.sorted_rates.begin(), pt.sorted_rates.end(), x);
      values.push_back(static_cast<double>(it - pt.sorted_rates.begin()) /
                       static_cast<double>(pt.sorted_rates.size()));
    }
    c["values"] = std::move(values);
    curves.push_back(std::move(c));
  }
  j["rate_cdf"] = {{"grid", summary.rate_grid}, {"curves", std::move(curves)}};

  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(2) << "\n";
  if (!f.good()) throw std::runtime_error("write failed: " + path);
}

namespace {

const SummaryPoint* find_point(const Summary& summary, const std::string& method,
                               double snr) {
  for (const SummaryPoint& pt : summary.points)
    if (pt.method == method && pt.snr_db == snr) return &pt;
  return nullptr;
}

}  // namespace

void write_plot_data(const Summary& summary, const std::string& dir) {
  {
    const std::string path = dir + "/plot_rate_vs_snr.dat";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "# snr_db";
    for (const std::string& m : summary.methods) f << ' ' << m;
    f << "\n";
    for (double snr : summary.snr_db) {
      f << fmt_short(snr);
      for (const std::string& m : summary.methods) {
        const SummaryPoint* pt = find_point(summary, m, snr);
        f << ' ' << (pt ? fmt_double(pt->mean_rate_bps_hz) : "nan");
      }
      f << "\n";
    }
    if (!f.good()) throw std::runtime_error("write failed: " + path);
  }

  for (double snr : summary.snr_db) {
    const std::string path = dir + "/plot_rate_cdf_snr" + fmt_short(snr) + ".dat";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "# rate_bps_hz";
    for (const std::string& m : summary.methods) f << ' ' << m;
    f << "\n";
    for (double x : summary.rate_grid) {
      f << fmt_double(x);
      for (const std::string& m : summary.methods) {
        const SummaryPoint* pt = find_point(summary, m, snr);
        if (!pt) {
          f << " nan";
          continue;
        }
        const auto it = std::upper_bound(pt->sorted_rates.begin(),
                                         pt->sorted_rates.end(), x);
        f << ' '
          << fmt_double(static_cast<double>(it - pt->sorted_rates.begin()) /
                        static_cast<double>(pt->sorted_rates.size()));
      }
      f << "\n";
    }
    if (!f.good()) throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace mcbeam
