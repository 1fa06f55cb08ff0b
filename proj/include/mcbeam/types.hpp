// SPDX-License-Identifier: Apache-2.0
//
// Shared scalar/matrix aliases and the error taxonomy used across mcbeam.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mcbeam {

using Real = double;
using Complex = std::complex<double>;

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Invalid sizes or size mismatches between related arguments.
class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A matrix that must have full column rank does not (duplicate codebook
// angles, rank-deficient RF precoder, ...).
class degenerate_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A construction was requested outside its hypothesis, e.g. more steering
// columns than antennas.
class not_applicable_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller-supplied values violate an operation's preconditions (singular or
// non-Hermitian gram, non-positive power, out-of-range search depth, ...).
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Experiment configuration rejected during validation.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative solver did not converge; carries the terminal state.
class solver_error : public std::runtime_error {
 public:
  solver_error(const std::string& what, int iterations, double gap)
      : std::runtime_error(what), iterations(iterations), gap(gap) {}
  int iterations;
  double gap;
};

}  // namespace mcbeam
