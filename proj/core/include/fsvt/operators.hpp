#pragma once

#include "fsvt/matrix.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace fsvt {

/// Index set of observed entries, kept sorted in row-major traversal order
/// and deduplicated. The order is part of the measurement-vector layout.
class SamplingMask {
 public:
  using Entry = std::pair<Index, Index>; // (row, col), 0-based

  SamplingMask(Index rows, Index cols, std::vector<Entry> entries);

  /// All m*n entries observed.
  static SamplingMask full(Index rows, Index cols);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index count() const { return static_cast<Index>(entries_.size()); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Text format: header "m n s" then one "row col" pair per line, 0-based.
  void save(std::ostream& out) const;
  static SamplingMask load(std::istream& in);

 private:
  Index rows_, cols_;
  std::vector<Entry> entries_;
};

/// Affine measurement map A : R^{m x n} -> R^d with forward and adjoint
/// application. Implementations are immutable after construction; forward
/// and adjoint are pure.
class LinearMeasurement {
 public:
  virtual ~LinearMeasurement() = default;

  virtual Index rows() const = 0;  // m
  virtual Index cols() const = 0;  // n
  virtual Index count() const = 0; // d

  virtual Vector forward(const Matrix& x) const = 0;
  virtual Matrix adjoint(const Vector& y) const = 0;
};

/// Entry-sampling operator for matrix completion: forward extracts the
/// masked entries in mask order, adjoint scatters a vector back to a matrix
/// that is zero off the mask. A*A is the orthogonal projector onto the
/// observed coordinates, so the operator norm is exactly 1.
class CompletionMap final : public LinearMeasurement {
 public:
  explicit CompletionMap(SamplingMask mask) : mask_(std::move(mask)) {}

  Index rows() const override { return mask_.rows(); }
  Index cols() const override { return mask_.cols(); }
  Index count() const override { return mask_.count(); }
  const SamplingMask& mask() const { return mask_; }

  Vector forward(const Matrix& x) const override;
  Matrix adjoint(const Vector& y) const override;

 private:
  SamplingMask mask_;
};

/// Generic map given by an explicit d x (m*n) coefficient matrix acting on
/// the row-major vectorization of X. Intended for tests and small problems.
class DenseMap final : public LinearMeasurement {
 public:
  DenseMap(Index rows, Index cols, Matrix coefficients);

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  Index count() const override { return coefficients_.rows(); }
  const Matrix& coefficients() const { return coefficients_; }

  Vector forward(const Matrix& x) const override;
  Matrix adjoint(const Vector& y) const override;

 private:
  Index rows_, cols_;
  Matrix coefficients_;
};

struct NormEstimate {
  double value = 0.0;      // estimate of ||A||_2^2
  bool degenerate = false; // true when the map annihilated the start matrix
  int iterations = 0;
};

/// Power iteration on X -> A*(A(X)), started from a fixed-seed random
/// matrix. The estimate is a lower bound of ||A||_2^2 up to convergence
/// error.
NormEstimate operator_norm_sq(const LinearMeasurement& map, int max_iters = 200,
                              double tol = 1e-10);

/// B_mu(X) = X + mu * A*(b - A(X)).
Matrix gradient_step(const Matrix& x, const LinearMeasurement& map,
                     const Vector& b, double mu);

} // namespace fsvt
