#pragma once

#include "fsvt/matrix.hpp"
#include "fsvt/operators.hpp"
#include "fsvt/thresholding.hpp"

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace fsvt {

// Iterative singular value thresholding for the regularized recovery problem
//
//   min_X ||A(X) - b||^2 + lambda * P_a(X)
//
// Every iteration takes the gradient step B = X + mu*A*(b - A(X)), computes
// its SVD, thresholds the singular values with the fraction-penalty prox at
// the effective weight lambda*mu, and reassembles the iterate. Three modes
// differ only in how (lambda, a) are chosen per iteration:
//
//   Fixed:    lambda and a from the config, threshold per the general regime.
//   Scheme2:  a fixed, lambda from the two-branch rule on sigma_r and
//             sigma_{r+1} of B; the branch picks the threshold formula.
//   Adaptive: both lambda and a from sigma_{r+1} of B, convex-regime
//             threshold; lambda = 0 steps fall back to X = B.

enum class LambdaMode { Fixed, Scheme2, Adaptive };

struct SolverConfig {
  double mu = 0.99;   // step size; descent guarantees need mu < 1/||A||_2^2
  double tau = 0.45;  // adaptive only, in (0, 1]
  double xi = 0.01;   // Scheme2 only, small positive
  double a = 1.0;     // fixed and Scheme2 only
  double lam = 0.0;   // fixed only, >= 0
  int target_rank = 1;
  double tol = 1e-8;
  int max_iter = 5000;
  double alpha = 0.0; // interpolation weight of the adaptive lambda rule
  LambdaMode mode = LambdaMode::Adaptive;
};

struct SolverResult {
  Matrix x_opt;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;            // C_lambda(X^{k+1})
  std::vector<std::pair<double, double>> param_trace; // (lambda_k, a_k)
  std::vector<double> step_norm_trace;            // ||X^{k+1} - X^k||_F
  // Singular values surviving the threshold per iteration; -1 when the step
  // was an identity/fallback step that never thresholded.
  std::vector<int> rank_trace;
  // Iterations where the g-evaluation left the arccos domain by more than
  // the tolerated overshoot and was clamped.
  int domain_clamps = 0;
  double wall_time_s = 0.0;
};

/// C_lambda(X) = ||A(X) - b||^2 + lam * P_a(X).
double objective(const Matrix& x, const LinearMeasurement& map, const Vector& b,
                 double lam, double a);

/// Surrogate mu*[C_lambda(X) - ||A(X) - A(Z)||^2] + ||X - Z||_F^2; bounds
/// mu*C_lambda(X) from above when mu <= 1/||A||_2^2.
double surrogate_objective(const Matrix& x, const Matrix& z,
                           const LinearMeasurement& map, const Vector& b,
                           double lam, double mu, double a);

struct Scheme2Lambda {
  enum class Branch { L1, L2 };
  double lam = 0.0;
  Branch branch = Branch::L1;
};

/// Two-branch lambda rule from the r-th and (r+1)-th singular values of the
/// gradient step: lambda_1 = 2*sigma_{r+1}/(a*mu) when it stays below
/// 1/(a^2*mu), else lambda_2 = (1-xi)*(2*a*sigma_r + 1)^2 / (4*a^2*mu).
Scheme2Lambda scheme2_lambda(double sigma_r, double sigma_r1, double a,
                             double mu, double xi);

struct AdaptiveParams {
  double lam = 0.0;
  double a = 0.0;
};

/// Joint rule lambda* = 4*sigma_{r+1}^2/(tau^2*mu), a* = tau/sqrt(lambda**mu).
/// The induced threshold lambda**mu*a*/2 equals sigma_{r+1} exactly and
/// a* <= 1/sqrt(lambda**mu) holds by construction. Returns nullopt when
/// sigma_{r+1} < 1e-12 * max(1, sigma_max), the degenerate case whose update
/// is X = B without thresholding (a* would blow up).
std::optional<AdaptiveParams> adaptive_params(double sigma_r1, double tau,
                                              double mu, double sigma_max = 1.0);

/// Relative step criterion ||next - prev||_F / max(1, ||prev||_F) <= tol.
bool stopping_met(const Matrix& x_prev, const Matrix& x_next, double tol);

SolverResult isvta_fixed(const LinearMeasurement& map, const Vector& b,
                         const SolverConfig& cfg, const Matrix& x0);
SolverResult isvta_fixed(const LinearMeasurement& map, const Vector& b,
                         const SolverConfig& cfg);

SolverResult isvta_scheme2(const LinearMeasurement& map, const Vector& b,
                           const SolverConfig& cfg, const Matrix& x0);
SolverResult isvta_scheme2(const LinearMeasurement& map, const Vector& b,
                           const SolverConfig& cfg);

SolverResult aisvta(const LinearMeasurement& map, const Vector& b,
                    const SolverConfig& cfg, const Matrix& x0);
SolverResult aisvta(const LinearMeasurement& map, const Vector& b,
                    const SolverConfig& cfg);

/// Dispatch on cfg.mode.
SolverResult solve(const LinearMeasurement& map, const Vector& b,
                   const SolverConfig& cfg, const Matrix& x0);
SolverResult solve(const LinearMeasurement& map, const Vector& b,
                   const SolverConfig& cfg);

/// CSV with header "iter,lambda,a,objective,step_norm", one row per
/// iteration, doubles printed round-trip exact.
void write_trace_csv(const SolverResult& result, std::ostream& out);

} // namespace fsvt
