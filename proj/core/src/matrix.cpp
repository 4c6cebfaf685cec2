#include "fsvt/matrix.hpp"

#include <stdexcept>

namespace fsvt {

ThinSvd thin_svd(const Matrix& x) {
  // BDCSVD wants a column-major working copy; the copy is cheap next to the
  // decomposition itself.
  Eigen::MatrixXd tmp = x;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(tmp, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("thin_svd: decomposition did not converge");
  ThinSvd out;
  out.u = svd.matrixU();
  out.s = svd.singularValues();
  out.v = svd.matrixV();
  return out;
}

} // namespace fsvt
