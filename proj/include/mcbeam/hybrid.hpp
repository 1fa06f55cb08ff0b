// SPDX-License-Identifier: Apache-2.0
//
// Hybrid analog/digital precoding: w = F_rf w_bb with F_rf drawn from a
// constant-modulus codebook. Selections are ranked by a cheap column-space
// bound (the power times the squared norm of each channel's orthogonal
// projection onto span(F_rf), minimized over users, at unit power here), and
// only the top candidates pay for a baseband max-min solve.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mcbeam/channel.hpp"
#include "mcbeam/codebook.hpp"
#include "mcbeam/maxmin.hpp"
#include "mcbeam/rng.hpp"
#include "mcbeam/types.hpp"

namespace mcbeam {

struct HybridPrecoder {
  RfSelection selection;  // indices empty when f_rf did not come from a codebook
  CVec w_bb;
  double t_achieved = 0.0;
  double score = 0.0;  // unit-power column-space bound of the chosen f_rf

  const CMat& f_rf() const { return selection.f_rf; }
  CVec combined() const { return selection.f_rf * w_bb; }
};

struct RankedCandidate {
  RfSelection selection;
  double score = 0.0;
  std::uint64_t ordinal = 0;  // position in lexicographic enumeration order
};

// min_k || proj_{span(f_rf)} h_k ||^2 at unit power. Invariant under
// right-multiplication of f_rf by any invertible matrix; throws
// degenerate_error when f_rf is column-rank deficient.
double rf_upper_bound(const Eigen::Ref<const CMat>& f_rf, const ChannelSet& channels);

// All C-choose-N selections scored by rf_upper_bound, sorted by descending
// score (ties keep lexicographic enumeration order), truncated to `top`.
std::vector<RankedCandidate> rank_selections(const RfCodebook& codebook, int n,
                                             const ChannelSet& channels,
                                             std::uint64_t top);

// Max-min baseband precoder behind a fixed analog stage: effective channels
// f_rf^H h_k under the gram f_rf^H f_rf power constraint.
std::pair<CVec, double> solve_baseband(const Eigen::Ref<const CMat>& f_rf,
                                       const ChannelSet& channels, double power,
                                       int n_candidates, Rng& rng);

// Score all selections, solve the baseband problem for the `top` ranked ones,
// return the best achieved t (ties keep the earlier ranked candidate).
HybridPrecoder ranked_search(const RfCodebook& codebook, int n, std::uint64_t top,
                             const ChannelSet& channels, double power,
                             int n_candidates, Rng& rng);

// ranked_search over every selection.
HybridPrecoder exhaustive_search(const RfCodebook& codebook, int n,
                                 const ChannelSet& channels, double power,
                                 int n_candidates, Rng& rng);

// Analog stage stacked from the users' own steering columns (requires the
// total path count to fit the RF chain budget: sum L_k <= M). Matches the
// fully digital optimum whenever the stacked columns are independent.
HybridPrecoder aod_aware_precoder(const SteeringInfo& steering,
                                  const ChannelSet& channels, double power,
                                  int n_candidates, Rng& rng);

// Fully digital max-min beamforming restricted to a subset of antennas.
MaxMinSolution subset_digital(const ChannelSet& channels,
                              const std::vector<int>& antennas, double power,
                              int n_candidates, Rng& rng);

// Draws the antenna subset (uniform among size-n subsets) from rng, then
// solves on it with the same stream.
MaxMinSolution random_subset_digital(const ChannelSet& channels, int n,
                                     double power, int n_candidates, Rng& rng);

}  // namespace mcbeam
