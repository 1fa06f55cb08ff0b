// SPDX-License-Identifier: Apache-2.0
//
// Max-min fair multicast beamforming:
//
//   maximize_w  min_k |h_k^H w|^2   subject to  w^H G w = P
//
// solved through the semidefinite relaxation (lift W = w w^H, drop the rank
// constraint), followed by rank-one extraction when the relaxation is tight
// and Gaussian randomization otherwise. The relaxation value is reported
// from the dual side, so t_sdp is a certified upper bound on the achievable t.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mcbeam/rng.hpp"
#include "mcbeam/types.hpp"

namespace mcbeam {

struct MaxMinProblem {
  std::vector<CVec> channels;  // K effective channels, common dimension d
  CMat gram;                   // d x d Hermitian positive definite
  double power = 1.0;          // total transmit power P

  // Identity-gram problem (fully digital array).
  static MaxMinProblem standard(std::vector<CVec> channels, double power);

  int dim() const { return channels.empty() ? 0 : static_cast<int>(channels.front().size()); }
  int num_users() const { return static_cast<int>(channels.size()); }
  void validate() const;
};

struct SolverDiagnostics {
  int iterations = 0;
  double gap = 0.0;                   // terminal duality gap (absolute)
  double top_eigenvalue_ratio = 0.0;  // lambda_1(W) / tr(W)
};

struct RelaxationResult {
  CMat w_mat;         // d x d Hermitian PSD with tr(G W) = P
  double t_sdp = 0.0; // certified optimum of the relaxation
  SolverDiagnostics diagnostics;
};

enum class SolveStatus { rank_one_exact, randomized };

struct MaxMinSolution {
  CVec w;                    // beamformer with w^H G w = P
  double t_achieved = 0.0;   // min_k |h_k^H w|^2
  double t_sdp = 0.0;
  SolveStatus status = SolveStatus::rank_one_exact;
  SolverDiagnostics diagnostics;
};

inline constexpr double kRankOneRelTol = 1e-6;
inline constexpr int kDefaultCandidates = 1000;

double min_user_snr(const std::vector<CVec>& channels, const CVec& w);

RelaxationResult solve_sdp_relaxation(const MaxMinProblem& problem);

// Walks w_mat to the boundary of the PSD cone without changing the gram
// trace or any user's value, lowering its rank while a direction in the
// constraint nullspace exists. With two users this always reaches rank one.
CMat reduce_rank(const CMat& w_mat, const MaxMinProblem& problem);

// Principal direction of w_mat rescaled to the power shell, if w_mat is
// rank one up to rel_tol on lambda_1 / tr; empty otherwise.
std::optional<CVec> extract_rank_one(const CMat& w_mat, const MaxMinProblem& problem,
                                     double rel_tol = kRankOneRelTol);

// Gaussian randomization: candidates U S^{1/2} v with v ~ CN(0, I), rescaled
// to the power shell; returns the best candidate and its min-SNR. Ties keep
// the earliest candidate.
std::pair<CVec, double> randomize(const CMat& w_mat, const MaxMinProblem& problem,
                                  int n_candidates, Rng& rng);

MaxMinSolution solve_maxmin(const MaxMinProblem& problem,
                            int n_candidates, Rng& rng);

}  // namespace mcbeam
