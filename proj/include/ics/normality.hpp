#pragma once

#include <span>

namespace ics {

struct JarqueBera {
  double statistic = 0.0;
  double p_value = 1.0;
  double skewness = 0.0;
  double kurtosis = 3.0;
};

// Jarque-Bera: JB = (n/6) (S^2 + (K-3)^2 / 4) with biased (divide-by-n)
// central moments; p-value from the chi-squared(2) upper tail.  Needs
// n >= 8 and nonzero variance.
JarqueBera jarque_bera(std::span<const double> x);

struct ShapiroWilk {
  double w = 1.0;
  double p_value = 1.0;
};

// Shapiro-Wilk W and p-value via Royston's approximation (AS R94): expected
// normal order statistics m_i = Phi^-1((i - 3/8) / (n + 1/4)), polynomial
// corrections to the two extreme weights, exact arcsine p-value at n = 3,
// lognormal transforms for 4 <= n <= 11 and n >= 12.  Needs 3 <= n <= 5000
// and nonzero range.
ShapiroWilk shapiro_wilk(std::span<const double> x);

}  // namespace ics
