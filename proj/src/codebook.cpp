// SPDX-License-Identifier: Apache-2.0

#include "mcbeam/codebook.hpp"

#include <cmath>
#include <numbers>

#include "mcbeam/channel.hpp"

namespace mcbeam {

namespace {

// Checked against the entry-modulus contract in validate(); used where the
// construction itself must normalize.
CVec constant_modulus(const CVec& v) {
  const int m = static_cast<int>(v.size());
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  CVec out(m);
  for (int i = 0; i < m; ++i) {
    const double mag = std::abs(v[i]);
    out[i] = mag == 0.0 ? Complex(scale, 0.0) : scale * v[i] / mag;
  }
  return out;
}

void require_full_column_rank(const CMat& mat, const char* what) {
  Eigen::ColPivHouseholderQR<CMat> qr(mat);
  if (qr.rank() < mat.cols()) throw degenerate_error(what);
}

}  // namespace

void RfCodebook::validate() const {
  if (columns.rows() < 1 || columns.cols() < 1)
    throw dimension_error("RfCodebook: empty");
  const double expected = 1.0 / std::sqrt(static_cast<double>(columns.rows()));
  for (Eigen::Index j = 0; j < columns.cols(); ++j)
    for (Eigen::Index i = 0; i < columns.rows(); ++i)
      if (std::abs(std::abs(columns(i, j)) - expected) > 1e-12 * expected)
        throw precondition_error("RfCodebook: entry modulus off 1/sqrt(M)");
}

RfCodebook dft_codebook(int num_antennas) {
  if (num_antennas < 1) throw dimension_error("dft_codebook: num_antennas < 1");
  RfCodebook cb;
  cb.kind = RfCodebook::Kind::dft;
  cb.columns.resize(num_antennas, num_antennas);
  const double scale = 1.0 / std::sqrt(static_cast<double>(num_antennas));
  const double w = -2.0 * std::numbers::pi / num_antennas;
  for (int n = 0; n < num_antennas; ++n)
    for (int m = 0; m < num_antennas; ++m)
      cb.columns(m, n) = std::polar(scale, w * m * n);
  return cb;
}

RfCodebook steering_codebook(int num_antennas, const std::vector<double>& aods,
                             double spacing_ratio) {
  if (num_antennas < 1 || aods.empty())
    throw dimension_error("steering_codebook: empty array or angle list");
  RfCodebook cb;
  cb.kind = RfCodebook::Kind::steering;
  cb.columns.resize(num_antennas, static_cast<int>(aods.size()));
  for (std::size_t i = 0; i < aods.size(); ++i)
    cb.columns.col(static_cast<int>(i)) =
        ula_steering(num_antennas, aods[i], spacing_ratio);
  require_full_column_rank(cb.columns, "steering_codebook: angles give a rank-deficient matrix");
  return cb;
}

RfCodebook eigen_codebook(const std::vector<CMat>& covariances) {
  if (covariances.empty()) throw dimension_error("eigen_codebook: no covariances");
  const Eigen::Index m = covariances.front().rows();
  RfCodebook cb;
  cb.kind = RfCodebook::Kind::eigen;
  cb.columns.resize(m, static_cast<Eigen::Index>(covariances.size()));
  for (std::size_t k = 0; k < covariances.size(); ++k) {
    const CMat& r = covariances[k];
    if (r.rows() != m || r.cols() != m)
      throw dimension_error("eigen_codebook: covariance shape mismatch");
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + r.cwiseAbs().maxCoeff()))
      throw precondition_error("eigen_codebook: covariance not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> eig(r);
    CVec v = eig.eigenvectors().col(m - 1);
    // fix the global phase: largest-modulus entry (lowest index on ties)
    // rotated onto the positive real axis
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::abs(v[i]) > best + 1e-15) best = std::abs(v[i]), pivot = i;
    if (best > 0.0) v *= std::conj(v[pivot]) / std::abs(v[pivot]);
    cb.columns.col(static_cast<Eigen::Index>(k)) = constant_modulus(v);
  }
  return cb;
}

std::uint64_t selection_count(int size, int n) {
  if (size < 0 || n < 0) throw dimension_error("selection_count: negative argument");
  if (n > size) return 0;
  n = std::min(n, size - n);
  std::uint64_t c = 1;
  for (int i = 1; i <= n; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(size - n + i);
    if (c > UINT64_MAX / num) throw std::overflow_error("selection_count: overflow");
    c = c * num / i;
  }
  return c;
}

SelectionEnumerator::SelectionEnumerator(const RfCodebook& codebook, int n)
    : codebook_(&codebook) {
  if (n < 1 || n > codebook.size())
    throw dimension_error("SelectionEnumerator: need 1 <= n <= codebook size");
  cursor_.resize(n);
  for (int i = 0; i < n; ++i) cursor_[i] = i;
}

bool SelectionEnumerator::next(RfSelection& out) {
  if (done_) return false;
  if (!fresh_) {
    const int n = static_cast<int>(cursor_.size());
    const int c = codebook_->size();
    int i = n - 1;
    while (i >= 0 && cursor_[i] == c - n + i) --i;
    if (i < 0) {
      done_ = true;
      return false;
    }
    ++cursor_[i];
    for (int j = i + 1; j < n; ++j) cursor_[j] = cursor_[j - 1] + 1;
  }
  fresh_ = false;
  out = make_selection(*codebook_, cursor_);
  return true;
}

RfSelection make_selection(const RfCodebook& codebook, std::vector<int> indices) {
  if (indices.empty()) throw dimension_error("make_selection: empty index list");
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= codebook.size())
      throw dimension_error("make_selection: index out of range");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw precondition_error("make_selection: indices must be strictly increasing");
  }
  RfSelection sel;
  sel.f_rf.resize(codebook.num_antennas(), static_cast<int>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i)
    sel.f_rf.col(static_cast<int>(i)) = codebook.columns.col(indices[i]);
  sel.indices = std::move(indices);
  return sel;
}

std::vector<RfSelection> enumerate_selections(const RfCodebook& codebook, int n) {
  std::vector<RfSelection> out;
  out.reserve(selection_count(codebook.size(), n));
  SelectionEnumerator en(codebook, n);
  RfSelection sel;
  while (en.next(sel)) out.push_back(sel);
  return out;
}

}  // namespace mcbeam
