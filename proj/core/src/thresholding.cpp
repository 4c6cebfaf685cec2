#include "fsvt/thresholding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fsvt {

namespace {

constexpr double kArccosSlack = 1e-9;
// Slack on the convex-regime precondition a <= 1/sqrt(lam); adaptive solvers
// construct a = tau/sqrt(lam*mu) with tau <= 1 and can overshoot by rounding.
constexpr double kRegimeSlack = 1e-12;

void require_positive(double v, const char* name) {
  if (!(v > 0.0))
    throw std::invalid_argument(std::string(name) + " must be positive, got " +
                                std::to_string(v));
}

bool convex_regime_ok(double a, double lam) {
  return a * std::sqrt(lam) <= 1.0 + kRegimeSlack;
}

} // namespace

ThresholdParams ThresholdParams::general(double a, double lam) {
  require_positive(a, "a");
  if (lam < 0.0) throw std::invalid_argument("lam must be nonnegative");
  return {a, lam, lam == 0.0 ? 0.0 : threshold_general(a, lam), Regime::General};
}

ThresholdParams ThresholdParams::convex(double a, double lam) {
  require_positive(a, "a");
  if (lam < 0.0) throw std::invalid_argument("lam must be nonnegative");
  return {a, lam, lam == 0.0 ? 0.0 : threshold_convex(a, lam), Regime::Convex};
}

double fraction_penalty(const Vector& spectrum, double a) {
  require_positive(a, "a");
  double sum = 0.0;
  for (Index i = 0; i < spectrum.size(); ++i) {
    const double s = spectrum(i);
    if (s < 0.0)
      throw std::invalid_argument("fraction_penalty: negative singular value " +
                                  std::to_string(s));
    sum += a * s / (a * s + 1.0);
  }
  return sum;
}

double threshold_general(double a, double lam) {
  require_positive(a, "a");
  require_positive(lam, "lam");
  if (lam <= 1.0 / (a * a)) return lam * a / 2.0;
  return std::sqrt(lam) - 1.0 / (2.0 * a);
}

double threshold_convex(double a, double lam) {
  require_positive(a, "a");
  require_positive(lam, "lam");
  if (!convex_regime_ok(a, lam))
    throw std::domain_error("threshold_convex: a > 1/sqrt(lam) (a=" +
                            std::to_string(a) + ", lam=" + std::to_string(lam) +
                            ")");
  return lam * a / 2.0;
}

double g_value(double a, double lam, double gamma, bool* clamped) {
  require_positive(a, "a");
  if (lam < 0.0) throw std::invalid_argument("lam must be nonnegative");

  const double abs_gamma = std::abs(gamma);
  const double scale = 1.0 + a * abs_gamma;
  double arg = 27.0 * lam * a * a / (4.0 * scale * scale * scale) - 1.0;
  if (arg > 1.0 || arg < -1.0) {
    if (arg > 1.0 + kArccosSlack || arg < -1.0 - kArccosSlack) {
      if (clamped == nullptr)
        throw std::domain_error(
            "g_value: arccos argument " + std::to_string(arg) +
            " outside [-1,1]; gamma below the valid threshold");
      *clamped = true;
    }
    arg = arg > 1.0 ? 1.0 : -1.0;
  }
  const double phi = std::acos(arg);
  const double value =
      scale / (3.0 * a) * (1.0 + 2.0 * std::cos(phi / 3.0 - M_PI / 3.0)) -
      1.0 / a;
  const double sign = gamma > 0.0 ? 1.0 : (gamma < 0.0 ? -1.0 : 0.0);
  return value * sign;
}

double scalar_prox_general(double a, double lam, double gamma) {
  const double t = threshold_general(a, lam);
  if (std::abs(gamma) <= t) return 0.0;
  // The surviving root lies in (0, |gamma|]; just above the threshold it is
  // close to zero and the trig formula may round slightly past it.
  const double value = g_value(a, lam, gamma);
  return gamma > 0.0 ? std::max(value, 0.0) : std::min(value, 0.0);
}

double scalar_prox_convex(double a, double lam, double gamma) {
  if (gamma < 0.0)
    throw std::invalid_argument("scalar_prox_convex: gamma must be nonnegative");
  const double t = threshold_convex(a, lam);
  if (gamma <= t) return 0.0;
  return std::max(g_value(a, lam, gamma), 0.0);
}

Matrix matrix_prox(const Matrix& y, double a, double lam, Regime regime) {
  require_positive(a, "a");
  if (lam < 0.0) throw std::invalid_argument("lam must be nonnegative");
  if (lam == 0.0) return y;

  if (y.rows() > y.cols()) {
    // Keep the short side first; G(Y^T) = G(Y)^T.
    Matrix yt = y.transpose();
    Matrix rt = matrix_prox(yt, a, lam, regime);
    return rt.transpose();
  }

  ThinSvd svd = thin_svd(y);
  Vector shrunk(svd.s.size());
  for (Index i = 0; i < svd.s.size(); ++i) {
    shrunk(i) = regime == Regime::General
                    ? scalar_prox_general(a, lam, svd.s(i))
                    : scalar_prox_convex(a, lam, svd.s(i));
  }
  return svd.u * shrunk.asDiagonal() * svd.v.transpose();
}

} // namespace fsvt
