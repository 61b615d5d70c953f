#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ics {

// Empirical distribution function of a window evaluated at its own points.
// counts[t] is the number of window values <= window[t] (an integer in
// 1..m), values[t] = counts[t] / m.  All rank logic downstream works on the
// integer counts, so ties and strictly monotone transformations behave
// identically to the raw data.
struct RankTransform {
  std::size_t window_length = 0;
  std::vector<int> counts;
  std::vector<double> values;
};

// O(m log m) rank transform of a window (m >= 1, finite values).
RankTransform ecdf_values(std::span<const double> window);

// Indicator matrix entry(t, j) = 1 iff F-hat(X_t) <= taus[j], i.e. iff
// counts[t] <= floor(tau * m) with a small relative slack so that exactly
// representable products (tau = j/32 with m a multiple of 32) land on the
// inclusive side.  Row-major, one row per time index.
struct IndicatorMatrix {
  std::size_t rows = 0;  // time indices
  std::size_t cols = 0;  // quantile levels
  std::vector<std::uint8_t> data;
  std::uint8_t at(std::size_t t, std::size_t j) const { return data[t * cols + j]; }
};

IndicatorMatrix indicator_matrix(const RankTransform& ranks, std::span<const double> taus);

// floor(x) with a 1e-9 relative slack: values a hair below an integer due to
// accumulated rounding are treated as that integer.  The slack is far below
// the unit spacing of the quantities we floor (rank thresholds, Fourier
// indices) and far above any realistic rounding error.
long floor_with_slack(double x);

}  // namespace ics
