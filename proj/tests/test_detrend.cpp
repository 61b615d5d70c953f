#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "ics/detrend.hpp"
#include "ics/errors.hpp"
#include "ics/rng.hpp"
#include "ics/series.hpp"

using Catch::Approx;

namespace {

// Dense reference solve: trend = (I + lambda D'D)^{-1} y with D the
// (n-2) x n second-difference stencil. Independent of the production
// banded-solver implementation.
std::vector<double> dense_trend(const std::vector<double>& y, double lambda) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n - 2, n);
  for (Eigen::Index i = 0; i < n - 2; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -2.0;
    d(i, i + 2) = 1.0;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) + lambda * d.transpose() * d;
  Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  Eigen::VectorXd t = a.ldlt().solve(rhs);
  return {t.data(), t.data() + n};
}

std::vector<double> noisy_series(std::size_t n, std::uint64_t stream) {
  ics::RngStream rng(2024, stream);
  std::vector<double> y(n);
  for (std::size_t t = 0; t < n; ++t) {
    y[t] = 0.05 * static_cast<double>(t) + std::sin(0.3 * static_cast<double>(t)) +
           0.5 * (rng.uniform() - 0.5);
  }
  return y;
}

}  // namespace

TEST_CASE("trend filter agrees with a dense solve", "[detrend]") {
  std::uint64_t stream = 0;
  for (std::size_t n : {4, 7, 23, 64, 150}) {
    for (double lambda : {1.0, 100.0, 1600.0}) {
      const std::vector<double> y = noisy_series(n, stream++);
      const std::vector<double> want = dense_trend(y, lambda);
      ics::HpConfig config;
      config.smoothing = lambda;
      const ics::HpResult got = ics::hp_filter(ics::Series(y), config);
      REQUIRE(got.trend.size() == n);
      for (std::size_t t = 0; t < n; ++t) {
        REQUIRE(got.trend[t] == Approx(want[t]).margin(1e-9));
      }
    }
  }
}

TEST_CASE("trend filter structural identities", "[detrend]") {
  SECTION("affine input passes through with zero cycle") {
    std::vector<double> y(40);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = 0.5 + 0.25 * static_cast<double>(t);
    const ics::HpResult r = ics::hp_filter(ics::Series(y), {});
    for (std::size_t t = 0; t < y.size(); ++t) {
      REQUIRE(r.trend[t] == Approx(y[t]).margin(1e-10));
      REQUIRE(r.cycle[t] == 0.0);
    }
  }

  SECTION("trend and cycle partition the input") {
    const std::vector<double> y = noisy_series(90, 17);
    ics::HpConfig config;
    config.smoothing = 100.0;
    const ics::HpResult r = ics::hp_filter(ics::Series(y), config);
    for (std::size_t t = 0; t < y.size(); ++t) {
      REQUIRE(r.trend[t] == y[t] - r.cycle[t]);
      REQUIRE(r.trend[t] + r.cycle[t] == Approx(y[t]).margin(1e-12));
    }
  }

  SECTION("zero smoothing returns the input as trend") {
    const std::vector<double> y = noisy_series(30, 5);
    ics::HpConfig config;
    config.smoothing = 0.0;
    const ics::HpResult r = ics::hp_filter(ics::Series(y), config);
    for (std::size_t t = 0; t < y.size(); ++t) {
      REQUIRE(r.trend[t] == Approx(y[t]).margin(1e-12));
    }
  }

  SECTION("large smoothing approaches the least-squares line") {
    const std::size_t n = 80;
    const std::vector<double> y = noisy_series(n, 23);
    ics::HpConfig config;
    config.smoothing = 1e10;
    const ics::HpResult r = ics::hp_filter(ics::Series(y), config);

    // Ordinary least squares fit of y on (1, t).
    double tbar = 0.0, ybar = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      tbar += static_cast<double>(t);
      ybar += y[t];
    }
    tbar /= static_cast<double>(n);
    ybar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      sxy += (static_cast<double>(t) - tbar) * (y[t] - ybar);
      sxx += (static_cast<double>(t) - tbar) * (static_cast<double>(t) - tbar);
    }
    const double slope = sxy / sxx;
    for (std::size_t t = 0; t < n; ++t) {
      const double line = ybar + slope * (static_cast<double>(t) - tbar);
      REQUIRE(r.trend[t] == Approx(line).margin(1e-4));
    }
  }

  SECTION("smoothing reduces curvature") {
    const std::vector<double> y = noisy_series(100, 31);
    ics::HpConfig config;
    config.smoothing = 14400.0;
    const ics::HpResult r = ics::hp_filter(ics::Series(y), config);
    auto curvature = [](const auto& v) {
      double s = 0.0;
      for (std::size_t t = 2; t < v.size(); ++t) {
        const double d2 = v[t] - 2.0 * v[t - 1] + v[t - 2];
        s += d2 * d2;
      }
      return s;
    };
    std::vector<double> trend(r.trend.values().begin(), r.trend.values().end());
    REQUIRE(curvature(trend) < 0.01 * curvature(y));
  }
}

TEST_CASE("trend filter input validation", "[detrend]") {
  const std::vector<double> y3 = {1.0, 2.0, 1.5};
  REQUIRE_THROWS_AS(ics::hp_filter(ics::Series(y3), {}), ics::DataError);

  const std::vector<double> y = noisy_series(20, 1);
  ics::HpConfig bad;
  bad.smoothing = -1.0;
  REQUIRE_THROWS_AS(ics::hp_filter(ics::Series(y), bad), ics::UsageError);
  bad.smoothing = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(ics::hp_filter(ics::Series(y), bad), ics::UsageError);
  bad.smoothing = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(ics::hp_filter(ics::Series(y), bad), ics::UsageError);
}
