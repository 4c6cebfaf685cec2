#pragma once

#include "fsvt/matrix.hpp"

namespace fsvt {

// Scalar and matrix proximal operators of the fraction penalty
//
//   P_a(X) = sum_i a*sigma_i(X) / (a*sigma_i(X) + 1),   a > 0,
//
// which interpolates between a multiple of the nuclear norm (small a) and
// rank(X) (a -> infinity). The scalar prox
//
//   h(gamma) = argmin_beta (beta - gamma)^2 + lam * a|beta| / (a|beta| + 1)
//
// has a closed form: zero below a threshold, otherwise the trigonometric
// root g_value of the stationarity cubic. Two parameter regimes exist:
//
//   General: any a > 0, lam > 0. The prox objective may have two local
//            minima; the threshold switches between formulas at
//            lam = 1/a^2 and the prox value jumps at the threshold when
//            lam > 1/a^2.
//   Convex:  0 < a <= 1/sqrt(lam). The objective is strictly convex on
//            beta >= 0, the minimizer is unique, threshold lam*a/2.

enum class Regime { General, Convex };

/// A penalty-shape / regularization-weight pair plus its derived threshold.
/// `lam` is the effective weight, i.e. lambda*mu when used inside a solver
/// step.
struct ThresholdParams {
  double a = 1.0;
  double lam = 0.0;
  double threshold = 0.0;
  Regime regime = Regime::General;

  static ThresholdParams general(double a, double lam);
  static ThresholdParams convex(double a, double lam);
};

/// P_a evaluated on a spectrum of nonnegative singular values.
double fraction_penalty(const Vector& spectrum, double a);

/// General-regime threshold: lam*a/2 if lam <= 1/a^2, else sqrt(lam) - 1/(2a).
double threshold_general(double a, double lam);

/// Convex-regime threshold lam*a/2; requires a <= 1/sqrt(lam).
double threshold_convex(double a, double lam);

/// Closed-form nonzero stationary value of the scalar prox objective.
/// Valid for |gamma| at or above the active regime's threshold; odd in gamma.
/// The arccos argument is clamped against floating-point overshoot within
/// 1e-9 of [-1, 1]; larger violations throw std::domain_error unless
/// `clamped` is non-null, in which case the argument is clamped and the flag
/// set (used by solvers that must not abort mid-run).
double g_value(double a, double lam, double gamma, bool* clamped = nullptr);

/// h_{a,lam}: 0 for |gamma| <= threshold_general(a, lam), else g_value.
double scalar_prox_general(double a, double lam, double gamma);

/// Unique minimizer of the strictly convex objective (gamma >= 0,
/// 0 < a <= 1/sqrt(lam)): 0 for gamma <= lam*a/2, else g_value.
double scalar_prox_convex(double a, double lam, double gamma);

/// Applies the scalar prox of the selected regime to each singular value:
/// G(Y) = U * Diag(h(sigma_1), ..., h(sigma_min)) * V^T. lam = 0 returns Y
/// unchanged.
Matrix matrix_prox(const Matrix& y, double a, double lam,
                   Regime regime = Regime::General);

} // namespace fsvt
