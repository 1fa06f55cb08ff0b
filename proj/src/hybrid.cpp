// SPDX-License-Identifier: Apache-2.0

#include "mcbeam/hybrid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcbeam {

namespace {

// Thin orthonormal basis of span(f_rf); throws when rank deficient.
CMat column_space_basis(const Eigen::Ref<const CMat>& f_rf) {
  if (f_rf.rows() < 1 || f_rf.cols() < 1 || f_rf.cols() > f_rf.rows())
    throw dimension_error("rf precoder must be tall: 1 <= N <= M");
  Eigen::ColPivHouseholderQR<CMat> qr(f_rf);
  if (qr.rank() < f_rf.cols())
    throw degenerate_error("rf precoder is column-rank deficient");
  CMat q = qr.householderQ() * CMat::Identity(f_rf.rows(), f_rf.cols());
  return q;
}

}  // namespace

double rf_upper_bound(const Eigen::Ref<const CMat>& f_rf, const ChannelSet& channels) {
  channels.validate();
  if (f_rf.rows() != channels.num_antennas)
    throw dimension_error("rf_upper_bound: antenna count mismatch");
  const CMat q = column_space_basis(f_rf);
  double bound = std::numeric_limits<double>::infinity();
  for (int k = 0; k < channels.num_users; ++k)
    bound = std::min(bound, (q.adjoint() * channels.h_bar.col(k)).squaredNorm());
  return bound;
}

std::vector<RankedCandidate> rank_selections(const RfCodebook& codebook, int n,
                                             const ChannelSet& channels,
                                             std::uint64_t top) {
  channels.validate();
  if (codebook.num_antennas() != channels.num_antennas)
    throw dimension_error("rank_selections: antenna count mismatch");
  const std::uint64_t total = selection_count(codebook.size(), n);
  if (top < 1 || top > total)
    throw precondition_error("rank_selections: search depth out of range");

  std::vector<RankedCandidate> all;
  all.reserve(total);
  SelectionEnumerator en(codebook, n);
  RfSelection sel;
  std::uint64_t ordinal = 0;
  while (en.next(sel)) {
    RankedCandidate cand;
    cand.score = rf_upper_bound(sel.f_rf, channels);
    cand.selection = std::move(sel);
    cand.ordinal = ordinal++;
    all.push_back(std::move(cand));
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) {
                     return a.score > b.score;
                   });
  all.resize(top);
  return all;
}

std::pair<CVec, double> solve_baseband(const Eigen::Ref<const CMat>& f_rf,
                                       const ChannelSet& channels, double power,
                                       int n_candidates, Rng& rng) {
  channels.validate();
  if (f_rf.rows() != channels.num_antennas)
    throw dimension_error("solve_baseband: antenna count mismatch");
  MaxMinProblem prob;
  prob.channels.reserve(channels.num_users);
  for (int k = 0; k < channels.num_users; ++k)
    prob.channels.push_back(f_rf.adjoint() * channels.h_bar.col(k));
  CMat gram = f_rf.adjoint() * f_rf;
  prob.gram = 0.5 * (gram + gram.adjoint());
  prob.power = power;
  MaxMinSolution sol = solve_maxmin(prob, n_candidates, rng);
  return {std::move(sol.w), sol.t_achieved};
}

HybridPrecoder ranked_search(const RfCodebook& codebook, int n, std::uint64_t top,
                             const ChannelSet& channels, double power,
                             int n_candidates, Rng& rng) {
  std::vector<RankedCandidate> ranked = rank_selections(codebook, n, channels, top);
  // every candidate gets its own stream keyed by enumeration ordinal, so a
  // deeper search evaluates shallower searches' candidates identically
  const std::uint64_t master = rng.next_u64();

  HybridPrecoder best;
  double best_t = -1.0;
  for (RankedCandidate& cand : ranked) {
    Rng sub(derive_seed(master, cand.ordinal));
    auto [w_bb, t] = solve_baseband(cand.selection.f_rf, channels, power,
                                    n_candidates, sub);
    if (t > best_t) {
      best_t = t;
      best.selection = std::move(cand.selection);
      best.w_bb = std::move(w_bb);
      best.t_achieved = t;
      best.score = cand.score;
    }
  }
  return best;
}

HybridPrecoder exhaustive_search(const RfCodebook& codebook, int n,
                                 const ChannelSet& channels, double power,
                                 int n_candidates, Rng& rng) {
  return ranked_search(codebook, n, selection_count(codebook.size(), n),
                       channels, power, n_candidates, rng);
}

HybridPrecoder aod_aware_precoder(const SteeringInfo& steering,
                                  const ChannelSet& channels, double power,
                                  int n_candidates, Rng& rng) {
  channels.validate();
  if (steering.users.empty() || static_cast<int>(steering.users.size()) != channels.num_users)
    throw dimension_error("aod_aware_precoder: steering info does not match users");
  const CMat v = steering.stacked();
  if (v.rows() != channels.num_antennas)
    throw dimension_error("aod_aware_precoder: antenna count mismatch");
  if (v.cols() > v.rows())
    throw not_applicable_error(
        "aod_aware_precoder: total path count exceeds antenna count");

  HybridPrecoder out;
  out.score = rf_upper_bound(v, channels);  // also rejects rank-deficient v
  auto [w_bb, t] = solve_baseband(v, channels, power, n_candidates, rng);
  out.selection.f_rf = v;
  out.w_bb = std::move(w_bb);
  out.t_achieved = t;
  return out;
}

MaxMinSolution subset_digital(const ChannelSet& channels,
                              const std::vector<int>& antennas, double power,
                              int n_candidates, Rng& rng) {
  channels.validate();
  if (antennas.empty()) throw dimension_error("subset_digital: empty subset");
  for (std::size_t i = 0; i < antennas.size(); ++i) {
    if (antennas[i] < 0 || antennas[i] >= channels.num_antennas)
      throw dimension_error("subset_digital: antenna index out of range");
    if (i > 0 && antennas[i] <= antennas[i - 1])
      throw precondition_error("subset_digital: indices must be strictly increasing");
  }
  const CMat rows = channels.h_bar(antennas, Eigen::all);
  std::vector<CVec> sub;
  sub.reserve(channels.num_users);
  for (int k = 0; k < channels.num_users; ++k) sub.push_back(rows.col(k));
  return solve_maxmin(MaxMinProblem::standard(std::move(sub), power),
                      n_candidates, rng);
}

MaxMinSolution random_subset_digital(const ChannelSet& channels, int n,
                                     double power, int n_candidates, Rng& rng) {
  channels.validate();
  const std::vector<int> antennas = rng.sample_indices(channels.num_antennas, n);
  return subset_digital(channels, antennas, power, n_candidates, rng);
}

}  // namespace mcbeam
