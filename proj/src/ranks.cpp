#include "ics/ranks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ics/errors.hpp"

namespace ics {

long floor_with_slack(double x) {
  const double slack = 1e-9 * std::max(1.0, std::fabs(x));
  return static_cast<long>(std::floor(x + slack));
}

RankTransform ecdf_values(std::span<const double> window) {
  const std::size_t m = window.size();
  if (m == 0) throw UsageError("rank transform of an empty window");
  for (std::size_t t = 0; t < m; ++t) {
    if (!std::isfinite(window[t])) {
      throw DataError("non-finite value at index " + std::to_string(t) +
                      " in rank transform");
    }
  }

  std::vector<double> sorted(window.begin(), window.end());
  std::sort(sorted.begin(), sorted.end());

  RankTransform out;
  out.window_length = m;
  out.counts.resize(m);
  out.values.resize(m);
  for (std::size_t t = 0; t < m; ++t) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), window[t]);
    const int c = static_cast<int>(it - sorted.begin());
    out.counts[t] = c;
    out.values[t] = static_cast<double>(c) / static_cast<double>(m);
  }
  return out;
}

IndicatorMatrix indicator_matrix(const RankTransform& ranks, std::span<const double> taus) {
  const std::size_t m = ranks.window_length;
  IndicatorMatrix out;
  out.rows = m;
  out.cols = taus.size();
  out.data.resize(m * taus.size());
  for (std::size_t j = 0; j < taus.size(); ++j) {
    const double tau = taus[j];
    if (!(tau > 0.0 && tau < 1.0)) {
      throw UsageError("quantile level " + std::to_string(tau) + " outside (0, 1)");
    }
    const long threshold = floor_with_slack(tau * static_cast<double>(m));
    for (std::size_t t = 0; t < m; ++t) {
      out.data[t * out.cols + j] = ranks.counts[t] <= threshold ? 1 : 0;
    }
  }
  return out;
}

}  // namespace ics
