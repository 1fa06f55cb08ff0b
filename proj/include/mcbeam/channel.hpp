// SPDX-License-Identifier: Apache-2.0
//
// Channel realizations for a single multicast group: i.i.d. Rayleigh draws
// and geometric (limited-scattering) draws over a uniform linear array.
#pragma once

#include <utility>
#include <vector>

#include "mcbeam/rng.hpp"
#include "mcbeam/types.hpp"

namespace mcbeam {

// Noise-normalized channels of one multicast group. Column k of h_bar is
// h_k / sigma[k], so user SNRs are |h_bar_k^H w|^2 under unit noise.
struct ChannelSet {
  int num_antennas = 0;
  int num_users = 0;
  CMat h_bar;  // num_antennas x num_users
  RVec sigma;  // per-user noise standard deviation, > 0

  void validate() const;
  std::vector<CVec> columns() const;
};

// Geometry behind one user's geometric channel.
struct UserPaths {
  RVec aods;      // departure angles, radians
  CVec gains;     // complex path gains
  CMat steering;  // num_antennas x path_count, unit-norm columns
  int path_count() const { return static_cast<int>(gains.size()); }
};

struct SteeringInfo {
  double spacing_ratio = 0.5;  // antenna spacing over wavelength
  std::vector<UserPaths> users;

  int total_paths() const;
  // All users' steering columns side by side (user order, path order).
  CMat stacked() const;
};

// Unit-norm ULA steering vector: entry m is exp(-j 2 pi r m cos(aod)) / sqrt(M).
CVec ula_steering(int num_antennas, double aod, double spacing_ratio);

// M x K i.i.d. CN(0,1) channels, unit noise. Requires num_antennas >= num_users >= 1.
ChannelSet gen_rayleigh(int num_antennas, int num_users, Rng& rng);

// Limited-scattering channels h_k = sqrt(M / L_k) * A_k g_k with AoDs uniform
// on [0, 2pi) and CN(0,1) gains; A_k collects ULA steering columns.
std::pair<ChannelSet, SteeringInfo> gen_geometric(int num_antennas,
                                                  int num_users,
                                                  const std::vector<int>& path_counts,
                                                  double spacing_ratio,
                                                  Rng& rng);

}  // namespace mcbeam
