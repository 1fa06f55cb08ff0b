// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mcbeam/maxmin.hpp"
#include "test_util.hpp"

using namespace mcbeam;
using testutil::dual_bound_k2;
using testutil::grid_maxmin_oracle;
using testutil::random_channels;
using testutil::random_cvec;
using testutil::random_gram;

TEST_CASE("single user: relaxation is exact and rank one") {
  Rng rng(101);
  const CVec h = random_cvec(rng, 5);
  const double p = 2.5;
  MaxMinProblem prob = MaxMinProblem::standard({h}, p);

  const RelaxationResult relax = solve_sdp_relaxation(prob);
  CHECK(relax.t_sdp == doctest::Approx(p * h.squaredNorm()).epsilon(1e-8));
  CHECK(relax.diagnostics.top_eigenvalue_ratio > 1.0 - 1e-8);
  CHECK((relax.w_mat * p / relax.w_mat.trace().real() -
         p * (h * h.adjoint()) / h.squaredNorm())
            .cwiseAbs()
            .maxCoeff() < 1e-5 * p);

  MaxMinSolution sol = solve_maxmin(prob, 100, rng);
  CHECK(sol.status == SolveStatus::rank_one_exact);
  CHECK(sol.t_achieved == doctest::Approx(p * h.squaredNorm()).epsilon(1e-8));
  CHECK(sol.w.squaredNorm() == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("orthogonal equal-norm pair splits the power evenly") {
  const double c = 1.7, p = 3.0;
  std::vector<CVec> channels(2, CVec::Zero(2));
  channels[0][0] = Complex(c, 0.0);
  channels[1][1] = Complex(c, 0.0);
  MaxMinProblem prob = MaxMinProblem::standard(channels, p);
  const RelaxationResult relax = solve_sdp_relaxation(prob);
  CHECK(relax.t_sdp == doctest::Approx(p * c * c / 2.0).epsilon(1e-8));
  CHECK(relax.t_sdp == doctest::Approx(grid_maxmin_oracle(channels, p)).epsilon(5e-3));
}

TEST_CASE("duplicated users collapse to the single-user value") {
  Rng rng(103);
  const CVec h = random_cvec(rng, 4);
  MaxMinProblem prob = MaxMinProblem::standard({h, h, h}, 1.0);
  const RelaxationResult relax = solve_sdp_relaxation(prob);
  CHECK(relax.t_sdp == doctest::Approx(h.squaredNorm()).epsilon(1e-8));
}

TEST_CASE("two-user relaxation matches the simplex dual bound") {
  Rng rng(104);
  for (const int d : {2, 3, 5, 8}) {
    for (int rep = 0; rep < 8; ++rep) {
      const CVec h1 = random_cvec(rng, d);
      const CVec h2 = random_cvec(rng, d);
      const double p = 0.25 + 4.0 * rng.uniform();
      const RelaxationResult relax =
          solve_sdp_relaxation(MaxMinProblem::standard({h1, h2}, p));
      const double oracle = dual_bound_k2(h1, h2, p);
      CHECK(relax.t_sdp == doctest::Approx(oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("two-antenna solutions match the brute-force grid") {
  Rng rng(105);
  for (int rep = 0; rep < 20; ++rep) {
    const int k = 1 + static_cast<int>(rng.below(3));
    const std::vector<CVec> channels = random_channels(rng, 2, k);
    const double p = 0.5 + 2.0 * rng.uniform();
    MaxMinSolution sol = solve_maxmin(MaxMinProblem::standard(channels, p), 1000, rng);
    const double oracle = grid_maxmin_oracle(channels, p);
    CHECK(std::abs(sol.t_achieved - oracle) <= 0.01 * oracle);
    CHECK(sol.t_achieved <= sol.t_sdp * (1.0 + 1e-6));
  }
}

TEST_CASE("relaxation reports the binding users at the optimum") {
  Rng rng(106);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const int k = 1 + static_cast<int>(rng.below(4));
    MaxMinProblem prob = MaxMinProblem::standard(random_channels(rng, d, k), 2.0);
    const RelaxationResult relax = solve_sdp_relaxation(prob);
    CHECK(relax.w_mat.trace().real() == doctest::Approx(2.0).epsilon(1e-6));
    Eigen::SelfAdjointEigenSolver<CMat> eig(relax.w_mat, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > -1e-8);
    double weakest = std::numeric_limits<double>::infinity();
    for (const CVec& h : prob.channels)
      weakest = std::min(weakest, (h.adjoint() * relax.w_mat * h).value().real());
    CHECK(std::abs(weakest - relax.t_sdp) <= 1e-6 * std::max(1.0, relax.t_sdp));
  }
}

TEST_CASE("rank-one extraction thresholds") {
  Rng rng(107);
  const CVec v = random_cvec(rng, 4);
  MaxMinProblem prob = MaxMinProblem::standard(random_channels(rng, 4, 2), 2.0);

  const CMat pure = v * v.adjoint();
  const auto w = extract_rank_one(pure, prob, 1e-6);
  REQUIRE(w.has_value());
  CHECK(w->squaredNorm() == doctest::Approx(2.0).epsilon(1e-10));
  // direction preserved up to phase
  CHECK(std::norm(v.normalized().dot(w->normalized())) == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_FALSE(extract_rank_one(CMat::Identity(4, 4), prob, 1e-6).has_value());

  CMat near = CMat::Zero(4, 4);
  const double eps = 1e-3;
  near(0, 0) = 1.0;
  near(1, 1) = 1.0 - 2.0 * eps;
  CHECK_FALSE(extract_rank_one(near, prob, 1e-6).has_value());
}

TEST_CASE("randomization is deterministic and respects the power shell") {
  Rng rng(108);
  MaxMinProblem prob = MaxMinProblem::standard(random_channels(rng, 4, 3), 1.5);
  const RelaxationResult relax = solve_sdp_relaxation(prob);

  Rng r1(5), r2(5);
  const auto [w1, t1] = randomize(relax.w_mat, prob, 200, r1);
  const auto [w2, t2] = randomize(relax.w_mat, prob, 200, r2);
  CHECK(t1 == t2);
  CHECK((w1 - w2).norm() == 0.0);
  CHECK(w1.squaredNorm() == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(t1 <= relax.t_sdp * (1.0 + 1e-6));
  CHECK(t1 == min_user_snr(prob.channels, w1));
}

TEST_CASE("gram constraint reduces to the whitened standard form") {
  Rng rng(109);
  const int d = 4, k = 3;
  const std::vector<CVec> channels = random_channels(rng, d, k);
  const CMat gram = random_gram(rng, d);
  const double p = 2.0;

  MaxMinProblem prob;
  prob.channels = channels;
  prob.gram = gram;
  prob.power = p;
  const RelaxationResult with_gram = solve_sdp_relaxation(prob);

  // oracle whitening via an eigendecomposition inverse square root
  Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
  const CMat inv_sqrt = eig.eigenvectors() *
                        eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                        eig.eigenvectors().adjoint();
  std::vector<CVec> white;
  for (const CVec& h : channels) white.push_back(inv_sqrt.adjoint() * h);
  const RelaxationResult plain =
      solve_sdp_relaxation(MaxMinProblem::standard(white, p));

  CHECK(with_gram.t_sdp == doctest::Approx(plain.t_sdp).epsilon(1e-6));
  CHECK((prob.gram * with_gram.w_mat).trace().real() == doctest::Approx(p).epsilon(1e-6));
}

TEST_CASE("solutions scale linearly with power") {
  Rng rng(110);
  const std::vector<CVec> channels = random_channels(rng, 3, 2);
  Rng ra(77), rb(77);
  MaxMinSolution low = solve_maxmin(MaxMinProblem::standard(channels, 1.0), 500, ra);
  MaxMinSolution high = solve_maxmin(MaxMinProblem::standard(channels, 7.5), 500, rb);
  CHECK(high.t_sdp == doctest::Approx(7.5 * low.t_sdp).epsilon(1e-10));
  CHECK(high.t_achieved == doctest::Approx(7.5 * low.t_achieved).epsilon(1e-9));
}

TEST_CASE("solver output is deterministic") {
  Rng rng(111);
  const std::vector<CVec> channels = random_channels(rng, 6, 4);
  Rng ra(9), rb(9);
  MaxMinSolution a = solve_maxmin(MaxMinProblem::standard(channels, 2.0), 300, ra);
  MaxMinSolution b = solve_maxmin(MaxMinProblem::standard(channels, 2.0), 300, rb);
  CHECK(a.t_achieved == b.t_achieved);
  CHECK(a.t_sdp == b.t_sdp);
  CHECK((a.w - b.w).norm() == 0.0);
}

TEST_CASE("degenerate and invalid problems are rejected") {
  Rng rng(112);
  MaxMinProblem prob = MaxMinProblem::standard(random_channels(rng, 3, 2), 1.0);

  MaxMinProblem empty;
  empty.power = 1.0;
  CHECK_THROWS_AS(empty.validate(), dimension_error);

  MaxMinProblem mismatched = prob;
  mismatched.channels.push_back(random_cvec(rng, 4));
  CHECK_THROWS_AS(mismatched.validate(), dimension_error);

  MaxMinProblem skew = prob;
  skew.gram(0, 1) = Complex(0.3, 0.1);
  CHECK_THROWS_AS(skew.validate(), precondition_error);

  MaxMinProblem singular = prob;
  singular.gram.setZero();
  CHECK_THROWS_AS(singular.validate(), precondition_error);
  CHECK_THROWS_AS(solve_sdp_relaxation(singular), precondition_error);

  MaxMinProblem freebie = prob;
  freebie.power = 0.0;
  CHECK_THROWS_AS(freebie.validate(), precondition_error);

  Rng r(1);
  CHECK_THROWS_AS(randomize(CMat::Identity(3, 3), prob, 0, r), precondition_error);
}

TEST_CASE("a zero channel pins the value at zero") {
  Rng rng(113);
  std::vector<CVec> channels = random_channels(rng, 3, 2);
  channels.push_back(CVec::Zero(3));
  MaxMinSolution sol = solve_maxmin(MaxMinProblem::standard(channels, 2.0), 50, rng);
  CHECK(sol.t_sdp == 0.0);
  CHECK(sol.t_achieved == 0.0);
}

TEST_CASE("one-dimensional problems reduce to the weakest user") {
  Rng rng(114);
  std::vector<CVec> channels;
  double weakest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    channels.push_back(random_cvec(rng, 1));
    weakest = std::min(weakest, channels.back().squaredNorm());
  }
  MaxMinSolution sol = solve_maxmin(MaxMinProblem::standard(channels, 4.0), 50, rng);
  CHECK(sol.t_achieved == doctest::Approx(4.0 * weakest).epsilon(1e-9));
  CHECK(sol.status == SolveStatus::rank_one_exact);
}

TEST_CASE("diagnostics describe the terminal iterate") {
  Rng rng(115);
  MaxMinSolution sol =
      solve_maxmin(MaxMinProblem::standard(random_channels(rng, 5, 3), 1.0), 100, rng);
  CHECK(sol.diagnostics.iterations > 0);
  CHECK(sol.diagnostics.iterations <= 100);
  CHECK(sol.diagnostics.gap >= 0.0);
  CHECK(sol.diagnostics.gap < 1e-6);
  CHECK(sol.diagnostics.top_eigenvalue_ratio > 0.0);
  CHECK(sol.diagnostics.top_eigenvalue_ratio <= 1.0 + 1e-12);
}

TEST_CASE("rank reduction reaches rank one for two users, preserving values") {
  Rng rng(120);
  for (int rep = 0; rep < 10; ++rep) {
    const std::vector<CVec> channels = random_channels(rng, 4, 2);
    MaxMinProblem prob = MaxMinProblem::standard(channels, 2.0);
    CMat w = CMat::Zero(4, 4);
    for (int i = 0; i < 2; ++i) {
      const CVec a = random_cvec(rng, 4);
      w += a * a.adjoint();
    }
    w *= 2.0 / w.trace().real();

    const CMat red = reduce_rank(w, prob);
    CHECK(red.trace().real() == doctest::Approx(2.0).epsilon(1e-10));
    for (const CVec& h : channels) {
      const double before = (h.adjoint() * (w * h)).value().real();
      const double after = (h.adjoint() * (red * h)).value().real();
      CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
    Eigen::SelfAdjointEigenSolver<CMat> eig(red, Eigen::EigenvaluesOnly);
    CHECK(eig.eigenvalues().minCoeff() > -1e-10);
    CHECK(eig.eigenvalues().maxCoeff() / red.trace().real() > 1.0 - 1e-8);
  }
}

TEST_CASE("rank reduction with three users stops at rank two or better") {
  Rng rng(121);
  for (int rep = 0; rep < 10; ++rep) {
    const std::vector<CVec> channels = random_channels(rng, 5, 3);
    MaxMinProblem prob = MaxMinProblem::standard(channels, 1.0);
    CMat w = CMat::Zero(5, 5);
    for (int i = 0; i < 3; ++i) {
      const CVec a = random_cvec(rng, 5);
      w += a * a.adjoint();
    }
    w /= w.trace().real();

    const CMat red = reduce_rank(w, prob);
    CHECK(red.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    for (const CVec& h : channels) {
      const double before = (h.adjoint() * (w * h)).value().real();
      const double after = (h.adjoint() * (red * h)).value().real();
      CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
    Eigen::SelfAdjointEigenSolver<CMat> eig(red);
    const RVec lam = eig.eigenvalues();
    CHECK(lam.minCoeff() > -1e-10);
    CHECK(lam[2] <= 1e-8 * lam[4]);  // at most two surviving directions
  }
}

TEST_CASE("rank reduction leaves rank-one matrices alone") {
  Rng rng(122);
  const std::vector<CVec> channels = random_channels(rng, 3, 2);
  MaxMinProblem prob = MaxMinProblem::standard(channels, 1.5);
  const CVec a = random_cvec(rng, 3);
  const CMat w = (a * a.adjoint()) * (1.5 / a.squaredNorm());
  const CMat red = reduce_rank(w, prob);
  CHECK((red - w).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(reduce_rank(CMat::Identity(2, 2), prob), dimension_error);
}
