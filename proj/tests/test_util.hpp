// SPDX-License-Identifier: Apache-2.0
//
// Independent oracles for the test suite. These deliberately avoid the
// library's solver paths: brute-force grids over the power shell, a
// golden-section dual bound for two users, and plain-loop quotient scans.
#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "mcbeam/channel.hpp"
#include "mcbeam/rng.hpp"
#include "mcbeam/types.hpp"

namespace testutil {

using mcbeam::CMat;
using mcbeam::Complex;
using mcbeam::CVec;

// Brute-force max-min value for two-antenna beamformers: w(alpha, beta) =
// sqrt(P) [cos a, sin a e^{jb}] sweeps the power shell modulo global phase.
inline double grid_maxmin_oracle(const std::vector<CVec>& channels, double power,
                                 int n_alpha = 720, int n_beta = 720) {
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  const double root_p = std::sqrt(power);
  double best = -1.0;
  for (int ia = 0; ia < n_alpha; ++ia) {
    const double alpha = half_pi * ia / (n_alpha - 1);
    const double w1 = root_p * std::cos(alpha);
    const double w2_mag = root_p * std::sin(alpha);
    for (int ib = 0; ib < n_beta; ++ib) {
      const double beta = two_pi * ib / n_beta;
      const Complex w2 = std::polar(w2_mag, beta);
      double worst = std::numeric_limits<double>::infinity();
      for (const CVec& h : channels) {
        const Complex dot = std::conj(h[0]) * w1 + std::conj(h[1]) * w2;
        worst = std::min(worst, std::norm(dot));
      }
      best = std::max(best, worst);
    }
  }
  return best;
}

// Certified two-user relaxation value by minimizing, over the weight
// simplex, the largest eigenvalue of q h1 h1^H + (1-q) h2 h2^H. Uses the
// closed-form top eigenvalue of the weighted 2x2 gram, so it never touches
// the solver. The objective is convex in q; golden-section suffices.
inline double dual_bound_k2(const CVec& h1, const CVec& h2, double power) {
  double g11 = 0.0, g22 = 0.0;
  Complex g12(0.0, 0.0);
  for (Eigen::Index i = 0; i < h1.size(); ++i) {
    g11 += std::norm(h1[i]);
    g22 += std::norm(h2[i]);
    g12 += std::conj(h1[i]) * h2[i];
  }
  const auto top_eig = [&](double q) {
    const double a = q * g11;
    const double b = (1.0 - q) * g22;
    const double c2 = q * (1.0 - q) * std::norm(g12);
    const double mid = 0.5 * (a + b);
    const double rad = std::sqrt(0.25 * (a - b) * (a - b) + c2);
    return mid + rad;
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = top_eig(x1), f2 = top_eig(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = top_eig(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = top_eig(x2);
    }
  }
  return power * std::min(f1, f2);
}

// Brute-force scan of the generalized Rayleigh quotient
// min_k |h_k^H F w|^2 / ||F w||^2 over two-dimensional baseband vectors.
inline double quotient_grid_max(const CMat& f, const std::vector<CVec>& channels,
                                int n_alpha = 720, int n_beta = 720) {
  const double half_pi = std::numbers::pi / 2.0;
  const double two_pi = 2.0 * std::numbers::pi;
  double best = -1.0;
  for (int ia = 0; ia < n_alpha; ++ia) {
    const double alpha = half_pi * ia / (n_alpha - 1);
    for (int ib = 0; ib < n_beta; ++ib) {
      const double beta = two_pi * ib / n_beta;
      CVec w(2);
      w[0] = std::cos(alpha);
      w[1] = std::polar(std::sin(alpha), beta);
      const CVec fw = f * w;
      const double denom = fw.squaredNorm();
      if (denom <= 0.0) continue;
      double worst = std::numeric_limits<double>::infinity();
      for (const CVec& h : channels) worst = std::min(worst, std::norm(h.dot(fw)));
      best = std::max(best, worst / denom);
    }
  }
  return best;
}

inline CVec random_cvec(mcbeam::Rng& rng, int d) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.cnormal();
  return v;
}

inline std::vector<CVec> random_channels(mcbeam::Rng& rng, int d, int k) {
  std::vector<CVec> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(random_cvec(rng, d));
  return out;
}

inline mcbeam::ChannelSet channelset_from(const std::vector<CVec>& cols) {
  mcbeam::ChannelSet set;
  set.num_antennas = static_cast<int>(cols.front().size());
  set.num_users = static_cast<int>(cols.size());
  set.h_bar.resize(set.num_antennas, set.num_users);
  for (int k = 0; k < set.num_users; ++k) set.h_bar.col(k) = cols[k];
  set.sigma = mcbeam::RVec::Ones(set.num_users);
  return set;
}

// Hermitian positive definite gram with eigenvalues bounded away from zero.
inline CMat random_gram(mcbeam::Rng& rng, int d) {
  CMat a(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) a(i, j) = rng.cnormal();
  CMat g = a * a.adjoint() + 0.5 * CMat::Identity(d, d);
  return 0.5 * (g + g.adjoint());
}

}  // namespace testutil
