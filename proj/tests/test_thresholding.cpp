#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fsvt/rng.hpp"
#include "fsvt/thresholding.hpp"

#include "support/grid_oracle.hpp"

#include <cmath>
#include <stdexcept>

using fsvt::Matrix;
using fsvt::Vector;

namespace {

// Reference values frozen from the staged grid oracle (grid_oracle.hpp),
// refined by golden-section search to full double precision.
constexpr double kProxGeneral112 = 1.9422418509696662;  // a=1 lam=1 gamma=2
constexpr double kProxConvexTenth = 0.95836307643197467; // a=0.1 lam=1 gamma=1
constexpr double kJumpHeight21 = 0.5;                    // a=2 lam=1 gamma=0.75

} // namespace

TEST_CASE("threshold_general: both branches and the crossover") {
  // Small-lam branch lam*a/2.
  CHECK(fsvt::threshold_general(1.0, 1.0) == doctest::Approx(0.5));
  CHECK(fsvt::threshold_general(0.5, 0.1) == doctest::Approx(0.025));
  // Large-lam branch sqrt(lam) - 1/(2a).
  CHECK(fsvt::threshold_general(2.0, 1.0) == doctest::Approx(0.75));
  CHECK(fsvt::threshold_general(1.0, 4.0) == doctest::Approx(1.5));

  SUBCASE("branch formulas agree at the crossover lam = 1/a^2") {
    for (int i = 0; i < 20; ++i) {
      const double a = 0.05 * std::pow(400.0, i / 19.0); // 0.05 .. 20
      const double lam = 1.0 / (a * a);
      const double low = lam * a / 2.0;
      const double high = std::sqrt(lam) - 1.0 / (2.0 * a);
      CHECK(std::abs(low - high) <= 1e-12 * std::max(1.0, low));
    }
  }

  SUBCASE("parameter domain") {
    CHECK_THROWS_AS(fsvt::threshold_general(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fsvt::threshold_general(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fsvt::threshold_general(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(fsvt::threshold_general(1.0, -0.5), std::invalid_argument);
  }
}

TEST_CASE("threshold_convex: value and regime guard") {
  CHECK(fsvt::threshold_convex(0.5, 1.0) == doctest::Approx(0.25));
  // Boundary a = 1/sqrt(lam) is inside the regime.
  CHECK(fsvt::threshold_convex(1.0, 1.0) == doctest::Approx(0.5));
  // Inside the regime the general threshold takes the same branch.
  CHECK(fsvt::threshold_convex(0.3, 2.0) ==
        doctest::Approx(fsvt::threshold_general(0.3, 2.0)));

  CHECK_THROWS_AS(fsvt::threshold_convex(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(fsvt::threshold_convex(2.0, 5.0), std::domain_error);
  CHECK_THROWS_AS(fsvt::threshold_convex(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fsvt::threshold_convex(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("ThresholdParams factories bind the regime and threshold") {
  const auto general = fsvt::ThresholdParams::general(1.0, 1.0);
  CHECK(general.threshold == doctest::Approx(0.5));
  CHECK(general.regime == fsvt::Regime::General);

  const auto convex = fsvt::ThresholdParams::convex(0.5, 1.0);
  CHECK(convex.threshold == doctest::Approx(0.25));
  CHECK(convex.regime == fsvt::Regime::Convex);

  // lam = 0 is the identity prox; threshold collapses to zero.
  CHECK(fsvt::ThresholdParams::general(3.0, 0.0).threshold == 0.0);
  CHECK(fsvt::ThresholdParams::convex(3.0, 0.0).threshold == 0.0);

  CHECK_THROWS_AS(fsvt::ThresholdParams::convex(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(fsvt::ThresholdParams::general(-1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(fsvt::ThresholdParams::general(1.0, -1.0),
                  std::invalid_argument);
}

TEST_CASE("fraction_penalty: known values and the rank limit") {
  CHECK(fsvt::fraction_penalty(Vector::Zero(4), 1.0) == 0.0);
  CHECK(fsvt::fraction_penalty(Vector(0), 1.0) == 0.0);

  Vector s(2);
  s << 2.0, 0.5;
  CHECK(fsvt::fraction_penalty(s, 10.0) ==
        doctest::Approx(20.0 / 21.0 + 5.0 / 6.0).epsilon(1e-14));
  // As a grows the penalty counts the nonzero entries.
  CHECK(fsvt::fraction_penalty(s, 1e12) == doctest::Approx(2.0).epsilon(1e-11));

  Vector bad(2);
  bad << 1.0, -0.1;
  CHECK_THROWS_AS(fsvt::fraction_penalty(bad, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fsvt::fraction_penalty(s, 0.0), std::invalid_argument);
}

TEST_CASE("g_value: frozen oracle points, identity at lam=0, odd symmetry") {
  CHECK(fsvt::g_value(1.0, 1.0, 2.0) ==
        doctest::Approx(kProxGeneral112).epsilon(1e-12));
  CHECK(fsvt::g_value(0.1, 1.0, 1.0) ==
        doctest::Approx(kProxConvexTenth).epsilon(1e-12));
  // Nonzero stationary value exactly at the large-lam threshold.
  CHECK(fsvt::g_value(2.0, 1.0, 0.75) ==
        doctest::Approx(kJumpHeight21).epsilon(1e-12));

  SUBCASE("lam = 0 reduces to the identity") {
    for (double a : {0.2, 1.0, 3.0})
      for (double gamma : {0.3, 1.0, 7.5})
        CHECK(fsvt::g_value(a, 0.0, gamma) ==
              doctest::Approx(gamma).epsilon(1e-12));
  }

  SUBCASE("odd in gamma") {
    CHECK(fsvt::g_value(1.0, 1.0, -2.0) == -fsvt::g_value(1.0, 1.0, 2.0));
    CHECK(fsvt::g_value(0.7, 0.3, -1.2) == -fsvt::g_value(0.7, 0.3, 1.2));
  }

  SUBCASE("arccos domain: throws far below the threshold, clamps on demand") {
    // gamma = 0 with lam*a^2 large puts the arccos argument way above 1.
    CHECK_THROWS_AS(fsvt::g_value(1.0, 1.0, 0.0), std::domain_error);
    bool clamped = false;
    const double v = fsvt::g_value(1.0, 1.0, 0.0, &clamped);
    CHECK(clamped);
    CHECK(v == 0.0); // sign(0) zeroes the clamped branch value
  }

  CHECK_THROWS_AS(fsvt::g_value(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(fsvt::g_value(1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("scalar_prox_general: dead zone, jump, and value optimality") {
  // lam <= 1/a^2: prox is continuous, zero on [0, lam*a/2].
  CHECK(fsvt::scalar_prox_general(1.0, 1.0, 0.4) == 0.0);
  CHECK(fsvt::scalar_prox_general(1.0, 1.0, 0.5) == 0.0);
  CHECK(fsvt::scalar_prox_general(1.0, 1.0, 0.5 + 1e-6) > 0.0);
  CHECK(fsvt::scalar_prox_general(1.0, 1.0, 0.5 + 1e-6) < 1e-2);

  // lam > 1/a^2: prox jumps from 0 to the oracle-confirmed height.
  CHECK(fsvt::scalar_prox_general(2.0, 1.0, 0.75) == 0.0);
  CHECK(fsvt::scalar_prox_general(2.0, 1.0, 0.75 + 1e-9) ==
        doctest::Approx(kJumpHeight21).epsilon(1e-6));

  CHECK(fsvt::scalar_prox_general(1.0, 1.0, 2.0) ==
        doctest::Approx(kProxGeneral112).epsilon(1e-12));
  CHECK(fsvt::scalar_prox_general(1.0, 1.0, -2.0) ==
        -fsvt::scalar_prox_general(1.0, 1.0, 2.0));

  SUBCASE("objective at the prox never exceeds the grid minimum") {
    fsvt::SplitMix64 rng(2024);
    for (int i = 0; i < 200; ++i) {
      const double a = 0.1 + 4.9 * rng.uniform();
      const double lam = 0.01 + 3.99 * rng.uniform();
      const double gamma = 4.0 * rng.uniform();
      const double p = fsvt::scalar_prox_general(a, lam, gamma);
      const auto grid = oracle::grid_minimize(gamma, a, lam);
      CHECK(oracle::shrink_objective(p, gamma, a, lam) <= grid.value + 1e-8);
    }
  }
}

TEST_CASE("scalar_prox_convex: matches the unique grid argmin") {
  CHECK(fsvt::scalar_prox_convex(0.1, 1.0, 1.0) ==
        doctest::Approx(kProxConvexTenth).epsilon(1e-12));
  CHECK(fsvt::scalar_prox_convex(0.5, 1.0, 0.25) == 0.0);
  CHECK(fsvt::scalar_prox_convex(0.5, 1.0, 0.2) == 0.0);
  // Continuous ramp just above the threshold.
  CHECK(fsvt::scalar_prox_convex(0.5, 1.0, 0.25 + 1e-6) > 0.0);
  CHECK(fsvt::scalar_prox_convex(0.5, 1.0, 0.25 + 1e-6) < 1e-2);

  SUBCASE("random convex-regime triples against the oracle") {
    fsvt::SplitMix64 rng(77);
    for (int i = 0; i < 200; ++i) {
      const double lam = 0.05 + 3.95 * rng.uniform();
      const double a = (0.05 + 0.95 * rng.uniform()) / std::sqrt(lam);
      const double gamma = 4.0 * rng.uniform();
      const double p = fsvt::scalar_prox_convex(a, lam, gamma);
      const auto grid = oracle::grid_minimize(gamma, a, lam);
      CHECK(std::abs(p - grid.argmin) <= 1e-4);
    }
  }

  CHECK_THROWS_AS(fsvt::scalar_prox_convex(1.0, 1.0, -0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(fsvt::scalar_prox_convex(2.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("matrix_prox: shrinks the spectrum, preserves factors") {
  SUBCASE("lam = 0 is the identity") {
    Matrix y(2, 3);
    y << 1, -2, 3, 4, 5, -6;
    CHECK((fsvt::matrix_prox(y, 1.0, 0.0) - y).norm() == 0.0);
  }

  SUBCASE("diagonal input maps to scalar proxes of the diagonal") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    d(2, 2) = 0.2; // below threshold 0.5 at a=1 lam=1
    const Matrix out = fsvt::matrix_prox(d, 1.0, 1.0);
    Matrix expect = Matrix::Zero(3, 3);
    expect(0, 0) = fsvt::scalar_prox_general(1.0, 1.0, 3.0);
    expect(1, 1) = fsvt::scalar_prox_general(1.0, 1.0, 1.0);
    CHECK((out - expect).norm() <= 1e-12);
  }

  SUBCASE("tall input goes through the transposed path") {
    fsvt::SplitMix64 rng(5);
    Matrix y(7, 4);
    for (fsvt::Index r = 0; r < y.rows(); ++r)
      for (fsvt::Index c = 0; c < y.cols(); ++c) y(r, c) = rng.normal();
    const Matrix tall = fsvt::matrix_prox(y, 1.0, 0.8);
    const Matrix wide = fsvt::matrix_prox(Matrix(y.transpose()), 1.0, 0.8);
    CHECK((tall - wide.transpose()).norm() <= 1e-12 * tall.norm());
  }

  SUBCASE("singular values of the output are the shrunk inputs") {
    fsvt::SplitMix64 rng(11);
    Matrix y(5, 5);
    for (fsvt::Index r = 0; r < 5; ++r)
      for (fsvt::Index c = 0; c < 5; ++c) y(r, c) = rng.normal();
    const double a = 0.9, lam = 1.3;
    const Vector sigma = fsvt::thin_svd(y).s;
    const Vector out_sigma = fsvt::thin_svd(fsvt::matrix_prox(y, a, lam)).s;
    for (fsvt::Index i = 0; i < sigma.size(); ++i) {
      const double expect = fsvt::scalar_prox_general(a, lam, sigma(i));
      CHECK(out_sigma(i) == doctest::Approx(expect).epsilon(1e-10));
    }
  }

  SUBCASE("thresholding reduces rank") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 0.3;
    const Matrix out = fsvt::matrix_prox(d, 1.0, 1.0);
    const Vector s = fsvt::thin_svd(out).s;
    CHECK(s(0) > 1.0);
    CHECK(s(1) <= 1e-12);
  }

  CHECK_THROWS_AS(fsvt::matrix_prox(Matrix::Identity(2, 2), 2.0, 1.0,
                                    fsvt::Regime::Convex),
                  std::domain_error);
  CHECK_THROWS_AS(fsvt::matrix_prox(Matrix::Identity(2, 2), -1.0, 1.0),
                  std::invalid_argument);
}
