// SPDX-License-Identifier: Apache-2.0

#include "mcbeam/channel.hpp"

#include <cmath>
#include <numbers>

namespace mcbeam {

void ChannelSet::validate() const {
  if (num_antennas < 1 || num_users < 1)
    throw dimension_error("ChannelSet: empty antenna array or user set");
  if (h_bar.rows() != num_antennas || h_bar.cols() != num_users)
    throw dimension_error("ChannelSet: h_bar shape mismatch");
  if (sigma.size() != num_users)
    throw dimension_error("ChannelSet: sigma length mismatch");
  if (!h_bar.allFinite() || !sigma.allFinite())
    throw precondition_error("ChannelSet: non-finite entries");
  if ((sigma.array() <= 0.0).any())
    throw precondition_error("ChannelSet: noise deviations must be positive");
}

std::vector<CVec> ChannelSet::columns() const {
  std::vector<CVec> out;
  out.reserve(num_users);
  for (int k = 0; k < num_users; ++k) out.push_back(h_bar.col(k));
  return out;
}

int SteeringInfo::total_paths() const {
  int n = 0;
  for (const auto& u : users) n += u.path_count();
  return n;
}

CMat SteeringInfo::stacked() const {
  if (users.empty()) return {};
  const Eigen::Index m = users.front().steering.rows();
  CMat v(m, total_paths());
  Eigen::Index col = 0;
  for (const auto& u : users) {
    v.middleCols(col, u.path_count()) = u.steering;
    col += u.path_count();
  }
  return v;
}

CVec ula_steering(int num_antennas, double aod, double spacing_ratio) {
  if (num_antennas < 1) throw dimension_error("ula_steering: num_antennas < 1");
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  const double step = -2.0 * std::numbers::pi * spacing_ratio * std::cos(aod);
  CVec a(num_antennas);
  for (int m = 0; m < num_antennas; ++m) a[m] = std::polar(scale, step * m);
  return a;
}

ChannelSet gen_rayleigh(int num_antennas, int num_users, Rng& rng) {
  if (num_users < 1 || num_antennas < num_users)
    throw dimension_error("gen_rayleigh: need num_antennas >= num_users >= 1");
  ChannelSet set;
  set.num_antennas = num_antennas;
  set.num_users = num_users;
  set.h_bar.resize(num_antennas, num_users);
  for (int k = 0; k < num_users; ++k)
    for (int m = 0; m < num_antennas; ++m) set.h_bar(m, k) = rng.cnormal();
  set.sigma = RVec::Ones(num_users);
  return set;
}

std::pair<ChannelSet, SteeringInfo> gen_geometric(int num_antennas,
                                                  int num_users,
                                                  const std::vector<int>& path_counts,
                                                  double spacing_ratio,
                                                  Rng& rng) {
  if (num_antennas < 1 || num_users < 1)
    throw dimension_error("gen_geometric: empty antenna array or user set");
  if (static_cast<int>(path_counts.size()) != num_users)
    throw dimension_error("gen_geometric: path_counts length must equal num_users");
  for (int l : path_counts)
    if (l < 1) throw dimension_error("gen_geometric: every path count must be >= 1");
  if (spacing_ratio <= 0.0)
    throw precondition_error("gen_geometric: spacing_ratio must be positive");

  ChannelSet set;
  set.num_antennas = num_antennas;
  set.num_users = num_users;
  set.h_bar.resize(num_antennas, num_users);
  set.sigma = RVec::Ones(num_users);

  SteeringInfo info;
  info.spacing_ratio = spacing_ratio;
  info.users.resize(num_users);

  for (int k = 0; k < num_users; ++k) {
    const int paths = path_counts[k];
    UserPaths& u = info.users[k];
    u.aods.resize(paths);
    u.gains.resize(paths);
    u.steering.resize(num_antennas, paths);
    for (int l = 0; l < paths; ++l) {
      u.aods[l] = 2.0 * std::numbers::pi * rng.uniform();
      u.gains[l] = rng.cnormal();
      u.steering.col(l) = ula_steering(num_antennas, u.aods[l], spacing_ratio);
    }
    const double scale = std::sqrt(static_cast<double>(num_antennas) / paths);
    set.h_bar.col(k) = scale * (u.steering * u.gains);
  }
  return {std::move(set), std::move(info)};
}

}  // namespace mcbeam
