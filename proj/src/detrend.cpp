#include "ics/detrend.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ics/errors.hpp"

namespace ics {

HpResult hp_filter(const Series& y, const HpConfig& config) {
  const std::size_t n = y.size();
  if (n < 4) {
    throw DataError("HP filter needs at least 4 observations, got " + std::to_string(n));
  }
  const double lam = config.smoothing;
  if (!(lam >= 0.0) || !std::isfinite(lam)) {
    throw UsageError("HP smoothing parameter must be finite and nonnegative");
  }

  // Right-hand side r = lam * D'D y, accumulated from the second differences
  // d[j] = y[j] - 2 y[j+1] + y[j+2].  An input with exactly zero second
  // differences gives r = 0 and hence an exactly zero cycle.
  std::vector<double> r(n, 0.0);
  for (std::size_t j = 0; j + 2 < n; ++j) {
    const double d = (y[j] - 2.0 * y[j + 1]) + y[j + 2];
    r[j] += d;
    r[j + 1] -= 2.0 * d;
    r[j + 2] += d;
  }
  for (double& v : r) v *= lam;

  // Bands of A = I + lam * D'D (pentadiagonal, SPD with eigenvalues >= 1).
  std::vector<double> a0(n, 1.0), a1(n, 0.0), a2(n, 0.0);  // diag, sub-1, sub-2
  for (std::size_t j = 0; j + 2 < n; ++j) {
    a0[j] += lam;
    a0[j + 1] += 4.0 * lam;
    a0[j + 2] += lam;
    a1[j + 1] += -2.0 * lam;  // A[j+1, j]
    a1[j + 2] += -2.0 * lam;  // A[j+2, j+1]
    a2[j + 2] += lam;         // A[j+2, j]
  }

  // Banded Cholesky A = L L' with bandwidth 2.
  std::vector<double> l0(n), l1(n, 0.0), l2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2) l2[i] = a2[i] / l0[i - 2];
    if (i >= 1) l1[i] = (a1[i] - (i >= 2 ? l2[i] * l1[i - 1] : 0.0)) / l0[i - 1];
    const double s = a0[i] - l1[i] * l1[i] - l2[i] * l2[i];
    if (!(s > 0.0)) throw NumericalError("HP filter: factorization lost positivity");
    l0[i] = std::sqrt(s);
  }

  // Solve L z = r, then L' c = z.
  std::vector<double> z(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = r[i];
    if (i >= 1) v -= l1[i] * z[i - 1];
    if (i >= 2) v -= l2[i] * z[i - 2];
    z[i] = v / l0[i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double v = z[ii];
    if (ii + 1 < n) v -= l1[ii + 1] * c[ii + 1];
    if (ii + 2 < n) v -= l2[ii + 2] * c[ii + 2];
    c[ii] = v / l0[ii];
  }

  std::vector<double> trend(n);
  for (std::size_t i = 0; i < n; ++i) trend[i] = y[i] - c[i];
  return HpResult{Series(std::move(trend), y.label(), y.interval()),
                  Series(std::move(c), y.label(), y.interval())};
}

}  // namespace ics
