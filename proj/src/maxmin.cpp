// SPDX-License-Identifier: Apache-2.0
//
// Relaxation core: a feasible-start primal-dual path-following method in
// complex Hermitian arithmetic (Mehrotra predictor-corrector). The gram
// constraint is whitened away up front with a Cholesky factor, so the core
// always sees
//
//   maximize t   s.t.  tr(h_k h_k^H W) - s_k - t = 0,  tr(W) = 1,
//                      W >= 0 (psd), s >= 0
//
// whose dual is: minimize mu s.t. Z = mu I - sum_k y_k h_k h_k^H >= 0,
// sum_k y_k = 1, y >= 0. The dual iterate is kept exactly feasible, so the
// returned relaxation value (from mu) certifiably upper-bounds every
// feasible beamformer.

#include "mcbeam/maxmin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcbeam {

namespace {

constexpr int kMaxIterations = 100;
// Pushing the gap much below 1e-8 stops paying off: the Newton back-solve
// conditions like 1/gap, so round-off starts eroding the primal iterate.
constexpr double kGapRelTol = 1e-8;
constexpr double kGapAcceptable = 1e-7;
constexpr double kStepFraction = 0.99;

struct Direction {
  CMat dw, dz;
  RVec ds, dy;
  double dmu = 0.0, dt = 0.0;

  bool finite() const {
    return dw.allFinite() && dz.allFinite() && ds.allFinite() &&
           dy.allFinite() && std::isfinite(dmu) && std::isfinite(dt);
  }
};

double max_step_nonneg(const RVec& x, const RVec& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx[i] < 0.0) a = std::min(a, -x[i] / dx[i]);
  return a;
}

// Largest alpha keeping x + alpha dx positive semidefinite (x positive definite).
double max_step_psd(const CMat& x, const CMat& dx) {
  Eigen::SelfAdjointEigenSolver<CMat> eig(x);
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmax > 0.0)) return 0.0;
  const RVec inv_sqrt =
      eig.eigenvalues().cwiseMax(lmax * 1e-14).cwiseSqrt().cwiseInverse();
  const CMat t = inv_sqrt.asDiagonal() *
                 (eig.eigenvectors().adjoint() * dx * eig.eigenvectors()) *
                 inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<CMat> te(t, Eigen::EigenvaluesOnly);
  const double lmin = te.eigenvalues().minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

struct StandardResult {
  CMat w;
  double t_primal = 0.0;
  double t_dual = 0.0;
  int iterations = 0;
  double gap = 0.0;
};

// h: d x K whitened channels, scaled so max_k ||h_k||^2 = 1; unit power.
StandardResult solve_standard(const CMat& h) {
  const int d = static_cast<int>(h.rows());
  const int kk = static_cast<int>(h.cols());
  const CMat eye = CMat::Identity(d, d);

  RVec norms(kk);
  for (int k = 0; k < kk; ++k) norms[k] = h.col(k).squaredNorm();
  if (norms.minCoeff() <= 0.0) {
    // a zero channel pins the optimum at t = 0 (mu = 0, all weight on that
    // user, is dual feasible)
    return {eye / d, 0.0, 0.0, 0, 0.0};
  }

  CMat w = eye / d;
  double t = 0.5 * norms.minCoeff() / d;
  RVec s = norms / d;
  s.array() -= t;
  RVec y = RVec::Constant(kk, 1.0 / kk);

  CMat z = -(h * y.asDiagonal() * h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> beig(-z, Eigen::EigenvaluesOnly);
  double mu = 2.0 * beig.eigenvalues().maxCoeff();
  z.diagonal().array() += mu;

  int iter = 0;
  int stalls = 0;
  for (; iter < kMaxIterations; ++iter) {
    if (mu - t <= kGapRelTol * std::max(1.0, std::abs(mu))) break;

    const double gap_comp = (w * z).trace().real() + y.dot(s);
    const double nu = gap_comp / (d + kk);

    Eigen::LLT<CMat> zllt(z);
    if (zllt.info() != Eigen::Success) break;  // numerically exhausted
    const CMat zinv = zllt.solve(eye);
    const CMat hw = h.adjoint() * (w * h);
    const CMat hz = h.adjoint() * (zinv * h);
    const CMat wzinv = w * zinv;
    const RVec g = (h.adjoint() * (wzinv * h)).diagonal().real();
    const double tau = wzinv.trace().real();
    const CMat wz = w * z;

    RMat sys = RMat::Zero(kk + 2, kk + 2);
    for (int k = 0; k < kk; ++k) {
      for (int j = 0; j < kk; ++j) sys(k, j) = (hw(k, j) * hz(j, k)).real();
      sys(k, k) += s[k] / y[k];
      sys(k, kk) = -g[k];
      sys(k, kk + 1) = -1.0;
      sys(kk, k) = g[k];
      sys(kk + 1, k) = 1.0;
    }
    sys(kk, kk) = -tau;
    Eigen::PartialPivLU<RMat> lu(sys);
    // one refinement pass; the system turns ill-conditioned as nu -> 0
    auto solve_refined = [&](const RVec& rhs) {
      RVec sol = lu.solve(rhs);
      sol += lu.solve(rhs - sys * sol);
      return sol;
    };

    auto direction = [&](double nu_c, const CMat* emat, const RVec* evec) {
      CMat rc = -wz;
      rc.diagonal().array() += nu_c;
      RVec ck(kk);
      double c0 = nu_c * zinv.trace().real() - w.trace().real();
      if (emat) {
        rc -= *emat;
        const CMat ez = (*emat) * zinv;
        const RVec hezh = (h.adjoint() * (ez * h)).diagonal().real();
        for (int k = 0; k < kk; ++k)
          ck[k] = nu_c * hz(k, k).real() - hw(k, k).real() - hezh[k];
        c0 -= ez.trace().real();
      } else {
        for (int k = 0; k < kk; ++k)
          ck[k] = nu_c * hz(k, k).real() - hw(k, k).real();
      }
      RVec rcv(kk), rhs(kk + 2);
      for (int k = 0; k < kk; ++k) {
        rcv[k] = nu_c - y[k] * s[k] - (evec ? (*evec)[k] : 0.0);
        // the first term re-targets the primal equality, soaking up round-off
        rhs[k] = (s[k] + t - hw(k, k).real()) + rcv[k] / y[k] - ck[k];
      }
      rhs[kk] = (1.0 - w.trace().real()) - c0;
      rhs[kk + 1] = 0.0;
      const RVec sol = solve_refined(rhs);

      Direction dir;
      dir.dy = sol.head(kk);
      dir.dmu = sol[kk];
      dir.dt = sol[kk + 1];
      dir.dz = -(h * dir.dy.asDiagonal() * h.adjoint());
      dir.dz.diagonal().array() += dir.dmu;
      dir.dz = 0.5 * (dir.dz + dir.dz.adjoint()).eval();
      const CMat dwraw = (rc - w * dir.dz) * zinv;
      dir.dw = 0.5 * (dwraw + dwraw.adjoint());
      dir.ds.resize(kk);
      for (int k = 0; k < kk; ++k) dir.ds[k] = (rcv[k] - s[k] * dir.dy[k]) / y[k];
      return dir;
    };

    const Direction aff = direction(0.0, nullptr, nullptr);
    if (!aff.finite()) break;
    const double apa = std::min(1.0, kStepFraction * std::min(max_step_psd(w, aff.dw),
                                                              max_step_nonneg(s, aff.ds)));
    const double ada = std::min(1.0, kStepFraction * std::min(max_step_psd(z, aff.dz),
                                                              max_step_nonneg(y, aff.dy)));
    double gap_aff = ((w + apa * aff.dw) * (z + ada * aff.dz)).trace().real() +
                     (y + ada * aff.dy).dot(s + apa * aff.ds);
    gap_aff = std::max(gap_aff, 0.0);
    const double sigma =
        std::clamp(std::pow(gap_aff / gap_comp, 3.0), 1e-4, 0.999);

    const CMat emat = aff.dw * aff.dz;
    const RVec evec = aff.dy.cwiseProduct(aff.ds);
    const Direction dir = direction(sigma * nu, &emat, &evec);
    if (!dir.finite()) break;
    const double ap = std::min(1.0, kStepFraction * std::min(max_step_psd(w, dir.dw),
                                                             max_step_nonneg(s, dir.ds)));
    const double ad = std::min(1.0, kStepFraction * std::min(max_step_psd(z, dir.dz),
                                                             max_step_nonneg(y, dir.dy)));
    if (std::max(ap, ad) < 1e-8) {
      if (++stalls >= 4) break;
    } else {
      stalls = 0;
    }

    w += ap * dir.dw;
    w = 0.5 * (w + w.adjoint()).eval();
    s += ap * dir.ds;
    t += ap * dir.dt;
    y += ad * dir.dy;
    mu += ad * dir.dmu;
    y /= y.sum();
    z = -(h * y.asDiagonal() * h.adjoint());
    z.diagonal().array() += mu;
    z = 0.5 * (z + z.adjoint()).eval();
  }

  // keep the reported bound certified: absorb any numerical indefiniteness
  // of z into mu (z + |lmin| I is the slack of mu + |lmin|)
  Eigen::SelfAdjointEigenSolver<CMat> zeig(z, Eigen::EigenvaluesOnly);
  const double zmin = zeig.eigenvalues().minCoeff();
  if (zmin < 0.0) mu -= zmin;

  const double gap = mu - t;
  if (gap > kGapAcceptable * std::max(1.0, std::abs(mu)))
    throw solver_error("relaxation solver did not converge", iter, gap);
  return {w, t, mu, iter, gap};
}

double quad_form(const CMat& a, const CVec& v) {
  return (v.adjoint() * (a * v)).value().real();
}

}  // namespace

MaxMinProblem MaxMinProblem::standard(std::vector<CVec> channels, double power) {
  MaxMinProblem p;
  p.channels = std::move(channels);
  const int d = p.dim();
  p.gram = CMat::Identity(d, d);
  p.power = power;
  return p;
}

void MaxMinProblem::validate() const {
  if (channels.empty()) throw dimension_error("MaxMinProblem: no users");
  const Eigen::Index d = channels.front().size();
  if (d < 1) throw dimension_error("MaxMinProblem: zero-dimensional channels");
  for (const CVec& h : channels) {
    if (h.size() != d) throw dimension_error("MaxMinProblem: channel dimension mismatch");
    if (!h.allFinite()) throw precondition_error("MaxMinProblem: non-finite channel");
  }
  if (gram.rows() != d || gram.cols() != d)
    throw dimension_error("MaxMinProblem: gram shape mismatch");
  if (!gram.allFinite()) throw precondition_error("MaxMinProblem: non-finite gram");
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw precondition_error("MaxMinProblem: gram not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 0.0) || lmin <= lmax * 1e-12)
    throw precondition_error("MaxMinProblem: gram singular or indefinite");
  if (!(power > 0.0) || !std::isfinite(power))
    throw precondition_error("MaxMinProblem: power must be positive and finite");
}

double min_user_snr(const std::vector<CVec>& channels, const CVec& w) {
  if (channels.empty()) throw dimension_error("min_user_snr: no users");
  double t = std::numeric_limits<double>::infinity();
  for (const CVec& h : channels) {
    if (h.size() != w.size()) throw dimension_error("min_user_snr: dimension mismatch");
    t = std::min(t, std::norm(h.dot(w)));
  }
  return t;
}

RelaxationResult solve_sdp_relaxation(const MaxMinProblem& problem) {
  problem.validate();
  const int d = problem.dim();
  const int kk = problem.num_users();

  Eigen::LLT<CMat> llt(problem.gram);
  if (llt.info() != Eigen::Success)
    throw precondition_error("solve_sdp_relaxation: gram effectively singular");

  CMat hw(d, kk);
  for (int k = 0; k < kk; ++k)
    hw.col(k) = llt.matrixL().solve(problem.channels[k]);

  double scale = 0.0;
  for (int k = 0; k < kk; ++k) scale = std::max(scale, hw.col(k).squaredNorm());

  RelaxationResult out;
  if (scale == 0.0) {
    out.w_mat = llt.solve(CMat::Identity(d, d)) * (problem.power / d);
    out.t_sdp = 0.0;
  } else {
    hw /= std::sqrt(scale);
    const StandardResult core = solve_standard(hw);
    // undo the whitening: W = P * L^{-H} W_core L^{-1}
    const CMat t1 = llt.matrixU().solve(core.w);
    CMat w = (llt.matrixU().solve(t1.adjoint())).adjoint() * problem.power;
    out.w_mat = 0.5 * (w + w.adjoint());
    out.t_sdp = problem.power * scale * core.t_dual;
    out.diagnostics.iterations = core.iterations;
    out.diagnostics.gap = problem.power * scale * core.gap;
  }

  Eigen::SelfAdjointEigenSolver<CMat> eig(out.w_mat, Eigen::EigenvaluesOnly);
  const double tr = out.w_mat.trace().real();
  out.diagnostics.top_eigenvalue_ratio =
      tr > 0.0 ? eig.eigenvalues().maxCoeff() / tr : 0.0;
  return out;
}

CMat reduce_rank(const CMat& w_mat, const MaxMinProblem& problem) {
  problem.validate();
  if (w_mat.rows() != problem.dim() || w_mat.cols() != problem.dim())
    throw dimension_error("reduce_rank: matrix shape mismatch");
  const int d = problem.dim();
  const int kk = problem.num_users();
  const double root2 = std::sqrt(2.0);

  CMat w = 0.5 * (w_mat + w_mat.adjoint());
  for (;;) {
    Eigen::SelfAdjointEigenSolver<CMat> weig(w);
    const double lmax = weig.eigenvalues().maxCoeff();
    if (!(lmax > 0.0)) return w;
    std::vector<int> keep;
    for (int i = 0; i < d; ++i)
      if (weig.eigenvalues()[i] > 1e-9 * lmax) keep.push_back(i);
    const int r = static_cast<int>(keep.size());
    if (r <= 1) return w;

    CMat b(d, r);
    for (int i = 0; i < r; ++i)
      b.col(i) =
          weig.eigenvectors().col(keep[i]) * std::sqrt(weig.eigenvalues()[keep[i]]);

    // Coordinates of tr(B^H C B .) over an orthonormal Hermitian basis; a
    // nullspace vector of these rows is a value-preserving direction.
    const int dof = r * r;
    RMat rows = RMat::Zero(kk + 1, dof);
    auto fill_row = [&](int row, const CMat& m) {
      int col = 0;
      for (int i = 0; i < r; ++i) rows(row, col++) = m(i, i).real();
      for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) {
          rows(row, col++) = root2 * m(i, j).real();
          rows(row, col++) = root2 * m(i, j).imag();
        }
      const double norm = rows.row(row).norm();
      if (norm > 1e-12) rows.row(row) /= norm;
      else rows.row(row).setZero();
    };
    fill_row(0, b.adjoint() * (problem.gram * b));
    for (int k = 0; k < kk; ++k) {
      const CVec bh = b.adjoint() * problem.channels[k];
      fill_row(k + 1, bh * bh.adjoint());
    }

    Eigen::JacobiSVD<RMat> svd(rows, Eigen::ComputeFullV);
    if (dof <= kk + 1) {
      const RVec sv = svd.singularValues();
      if (sv[sv.size() - 1] > 1e-8 * std::max(sv[0], 1.0)) return w;
    }
    RVec x = svd.matrixV().col(dof - 1);

    CMat delta(r, r);
    int col = 0;
    for (int i = 0; i < r; ++i) delta(i, i) = x[col++];
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) {
        delta(i, j) = Complex(x[col], x[col + 1]) / root2;
        delta(j, i) = std::conj(delta(i, j));
        col += 2;
      }

    Eigen::SelfAdjointEigenSolver<CMat> deig(delta, Eigen::EigenvaluesOnly);
    const double lo = deig.eigenvalues().minCoeff();
    const double hi = deig.eigenvalues().maxCoeff();
    const double extreme = std::abs(lo) > std::abs(hi) ? lo : hi;
    if (extreme == 0.0) return w;
    CMat core = -delta / extreme;
    core.diagonal().array() += 1.0;
    w = b * core * b.adjoint();
    w = 0.5 * (w + w.adjoint()).eval();
  }
}

std::optional<CVec> extract_rank_one(const CMat& w_mat, const MaxMinProblem& problem,
                                     double rel_tol) {
  problem.validate();
  if (w_mat.rows() != problem.dim() || w_mat.cols() != problem.dim())
    throw dimension_error("extract_rank_one: matrix shape mismatch");
  const CMat sym = 0.5 * (w_mat + w_mat.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(sym);
  const double tr = sym.trace().real();
  if (!(tr > 0.0)) return std::nullopt;
  if (eig.eigenvalues().maxCoeff() / tr < 1.0 - rel_tol) return std::nullopt;
  const CVec u = eig.eigenvectors().col(problem.dim() - 1);
  const double q = quad_form(problem.gram, u);
  if (!(q > 0.0)) return std::nullopt;
  return std::sqrt(problem.power / q) * u;
}

std::pair<CVec, double> randomize(const CMat& w_mat, const MaxMinProblem& problem,
                                  int n_candidates, Rng& rng) {
  problem.validate();
  if (n_candidates < 1) throw precondition_error("randomize: n_candidates < 1");
  if (w_mat.rows() != problem.dim() || w_mat.cols() != problem.dim())
    throw dimension_error("randomize: matrix shape mismatch");
  const int d = problem.dim();
  Eigen::SelfAdjointEigenSolver<CMat> eig(0.5 * (w_mat + w_mat.adjoint()));
  const RVec lam = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMat factor = eig.eigenvectors() * lam.asDiagonal();

  CVec best;
  double best_t = -1.0;
  CVec v(d);
  for (int i = 0; i < n_candidates; ++i) {
    for (int j = 0; j < d; ++j) v[j] = rng.cnormal();
    CVec cand = factor * v;
    const double q = quad_form(problem.gram, cand);
    if (!(q > 0.0)) continue;
    cand *= std::sqrt(problem.power / q);
    const double tc = min_user_snr(problem.channels, cand);
    if (tc > best_t) {
      best_t = tc;
      best = std::move(cand);
    }
  }
  if (best.size() == 0) {
    best = CVec::Zero(d);
    best[0] = std::sqrt(problem.power / problem.gram(0, 0).real());
    best_t = min_user_snr(problem.channels, best);
  }
  return {std::move(best), best_t};
}

MaxMinSolution solve_maxmin(const MaxMinProblem& problem, int n_candidates, Rng& rng) {
  RelaxationResult relax = solve_sdp_relaxation(problem);
  MaxMinSolution sol;
  sol.t_sdp = relax.t_sdp;
  sol.diagnostics = relax.diagnostics;
  const CMat reduced = reduce_rank(relax.w_mat, problem);
  const double tr = reduced.trace().real();
  if (tr > 0.0) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(reduced, Eigen::EigenvaluesOnly);
    sol.diagnostics.top_eigenvalue_ratio = eig.eigenvalues().maxCoeff() / tr;
  }
  if (auto u = extract_rank_one(reduced, problem)) {
    sol.w = std::move(*u);
    sol.status = SolveStatus::rank_one_exact;
  } else {
    auto [w, t] = randomize(reduced, problem, n_candidates, rng);
    sol.w = std::move(w);
    sol.status = SolveStatus::randomized;
  }
  sol.t_achieved = min_user_snr(problem.channels, sol.w);
  return sol;
}

}  // namespace mcbeam
