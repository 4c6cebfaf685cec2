#include "fsvt/operators.hpp"

#include "fsvt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace fsvt {

SamplingMask::SamplingMask(Index rows, Index cols, std::vector<Entry> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ <= 0 || cols_ <= 0)
    throw std::invalid_argument("SamplingMask: dimensions must be positive");
  for (const auto& [r, c] : entries_) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
      throw std::invalid_argument("SamplingMask: entry (" + std::to_string(r) +
                                  "," + std::to_string(c) + ") out of range");
  }
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
}

SamplingMask SamplingMask::full(Index rows, Index cols) {
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(rows * cols));
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) entries.emplace_back(r, c);
  return SamplingMask(rows, cols, std::move(entries));
}

void SamplingMask::save(std::ostream& out) const {
  out << rows_ << ' ' << cols_ << ' ' << count() << '\n';
  for (const auto& [r, c] : entries_) out << r << ' ' << c << '\n';
}

SamplingMask SamplingMask::load(std::istream& in) {
  Index rows = 0, cols = 0, count = 0;
  if (!(in >> rows >> cols >> count))
    throw std::runtime_error("SamplingMask::load: malformed header");
  if (count < 0) throw std::runtime_error("SamplingMask::load: negative count");
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    Index r = 0, c = 0;
    if (!(in >> r >> c))
      throw std::runtime_error("SamplingMask::load: truncated entry list");
    entries.emplace_back(r, c);
  }
  return SamplingMask(rows, cols, std::move(entries));
}

Vector CompletionMap::forward(const Matrix& x) const {
  if (x.rows() != rows() || x.cols() != cols())
    throw std::invalid_argument("CompletionMap::forward: shape mismatch");
  Vector out(count());
  Index k = 0;
  for (const auto& [r, c] : mask_.entries()) out(k++) = x(r, c);
  return out;
}

Matrix CompletionMap::adjoint(const Vector& y) const {
  if (y.size() != count())
    throw std::invalid_argument("CompletionMap::adjoint: length mismatch");
  Matrix out = Matrix::Zero(rows(), cols());
  Index k = 0;
  for (const auto& [r, c] : mask_.entries()) out(r, c) = y(k++);
  return out;
}

DenseMap::DenseMap(Index rows, Index cols, Matrix coefficients)
    : rows_(rows), cols_(cols), coefficients_(std::move(coefficients)) {
  if (rows_ <= 0 || cols_ <= 0)
    throw std::invalid_argument("DenseMap: dimensions must be positive");
  if (coefficients_.cols() != rows_ * cols_)
    throw std::invalid_argument(
        "DenseMap: coefficient matrix must have m*n columns");
}

Vector DenseMap::forward(const Matrix& x) const {
  if (x.rows() != rows_ || x.cols() != cols_)
    throw std::invalid_argument("DenseMap::forward: shape mismatch");
  // Row-major storage makes x.data() the row-major vectorization.
  Eigen::Map<const Vector> flat(x.data(), rows_ * cols_);
  return coefficients_ * flat;
}

Matrix DenseMap::adjoint(const Vector& y) const {
  if (y.size() != count())
    throw std::invalid_argument("DenseMap::adjoint: length mismatch");
  Vector flat = coefficients_.transpose() * y;
  return Eigen::Map<const Matrix>(flat.data(), rows_, cols_);
}

NormEstimate operator_norm_sq(const LinearMeasurement& map, int max_iters,
                              double tol) {
  if (max_iters < 1)
    throw std::invalid_argument("operator_norm_sq: max_iters must be >= 1");

  // Fixed start so repeated estimates agree bit for bit.
  SplitMix64 rng(0x51D0F17E, /*stream=*/7);
  Matrix x(map.rows(), map.cols());
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c) x(r, c) = rng.normal();
  x /= x.norm();

  NormEstimate est;
  double prev = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Matrix tx = map.adjoint(map.forward(x));
    const double norm = tx.norm();
    est.iterations = it + 1;
    if (norm == 0.0) {
      est.value = 0.0;
      est.degenerate = true;
      return est;
    }
    // Rayleigh quotient of A*A at the current unit iterate.
    est.value = x.cwiseProduct(tx).sum();
    x = tx / norm;
    if (it > 0 && std::abs(est.value - prev) <= tol * std::max(1.0, est.value))
      break;
    prev = est.value;
  }
  return est;
}

Matrix gradient_step(const Matrix& x, const LinearMeasurement& map,
                     const Vector& b, double mu) {
  if (x.rows() != map.rows() || x.cols() != map.cols())
    throw std::invalid_argument("gradient_step: iterate shape mismatch");
  if (b.size() != map.count())
    throw std::invalid_argument("gradient_step: measurement length mismatch");
  return x + mu * map.adjoint(b - map.forward(x));
}

} // namespace fsvt
