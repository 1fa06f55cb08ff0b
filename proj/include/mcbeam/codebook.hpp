// SPDX-License-Identifier: Apache-2.0
//
// Constant-modulus RF codebooks and enumeration of RF chain selections.
#pragma once

#include <cstdint>
#include <vector>

#include "mcbeam/types.hpp"

namespace mcbeam {

// Candidate analog beams; every entry has modulus 1/sqrt(num_antennas).
struct RfCodebook {
  enum class Kind { dft, steering, eigen };
  Kind kind = Kind::dft;
  CMat columns;  // num_antennas x size

  int num_antennas() const { return static_cast<int>(columns.rows()); }
  int size() const { return static_cast<int>(columns.cols()); }
  void validate() const;
};

// One choice of codebook columns for the RF precoder.
struct RfSelection {
  std::vector<int> indices;  // strictly increasing; empty when f_rf is explicit
  CMat f_rf;                 // num_antennas x chain count
};

// Columns of the unitary DFT matrix scaled to constant modulus, size = M.
RfCodebook dft_codebook(int num_antennas);

// ULA steering vectors at the given angles. The angles must produce a
// full-column-rank matrix (duplicates rejected).
RfCodebook steering_codebook(int num_antennas, const std::vector<double>& aods,
                             double spacing_ratio);

// Per-user dominant covariance eigenvectors, normalized entrywise to constant
// modulus (exact-zero entries take phase 0). Deterministic: the eigenvector's
// global phase is fixed before normalization.
RfCodebook eigen_codebook(const std::vector<CMat>& covariances);

// Binomial coefficient; 0 when n > size, throws on negative arguments or
// uint64 overflow.
std::uint64_t selection_count(int size, int n);

// Streams the C-choose-N selections in lexicographic index order.
class SelectionEnumerator {
 public:
  SelectionEnumerator(const RfCodebook& codebook, int n);
  bool next(RfSelection& out);

 private:
  const RfCodebook* codebook_;
  std::vector<int> cursor_;
  bool fresh_ = true;
  bool done_ = false;
};

RfSelection make_selection(const RfCodebook& codebook, std::vector<int> indices);
std::vector<RfSelection> enumerate_selections(const RfCodebook& codebook, int n);

}  // namespace mcbeam
