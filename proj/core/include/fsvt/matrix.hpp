#pragma once

#include <Eigen/Dense>

namespace fsvt {

// Dense real matrices are stored row-major; file formats and the entry
// ordering of sampling masks follow the same convention.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thin SVD, x = u * s.asDiagonal() * v.transpose(), with s sorted
/// non-increasing and length min(rows, cols).
struct ThinSvd {
  Matrix u;
  Vector s;
  Matrix v;
};

ThinSvd thin_svd(const Matrix& x);

} // namespace fsvt
