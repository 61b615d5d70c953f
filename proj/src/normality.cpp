#include "ics/normality.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ics/distributions.hpp"
#include "ics/errors.hpp"

namespace ics {

namespace {

void check_finite(std::span<const double> x, const char* what) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw DataError(std::string(what) + ": non-finite value at index " +
                      std::to_string(i));
    }
  }
}

double poly(const double* c, int k, double x) {
  double v = c[k - 1];
  for (int i = k - 2; i >= 0; --i) v = v * x + c[i];
  return v;
}

}  // namespace

JarqueBera jarque_bera(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 8) {
    throw UsageError("Jarque-Bera needs at least 8 observations, got " +
                     std::to_string(n));
  }
  check_finite(x, "Jarque-Bera");

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (!(m2 > 0.0)) throw NumericalError("Jarque-Bera: zero variance");

  JarqueBera out;
  out.skewness = m3 / std::pow(m2, 1.5);
  out.kurtosis = m4 / (m2 * m2);
  const double k3 = out.kurtosis - 3.0;
  out.statistic = static_cast<double>(n) / 6.0 *
                  (out.skewness * out.skewness + 0.25 * k3 * k3);
  out.p_value = chi_squared_sf(out.statistic, 2);
  return out;
}

ShapiroWilk shapiro_wilk(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3 || n > 5000) {
    throw UsageError("Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));
  }
  check_finite(x, "Shapiro-Wilk");

  std::vector<double> xs(x.begin(), x.end());
  std::sort(xs.begin(), xs.end());
  const double range = xs[n - 1] - xs[0];
  if (!(range > 1e-19)) throw NumericalError("Shapiro-Wilk: zero range");

  // Royston (1995), AS R94 polynomial coefficients.
  static const double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  static const double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static const double c3[4] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static const double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static const double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static const double c6[3] = {-0.4803, -0.082676, 0.0030302};

  const std::size_t nn2 = n / 2;
  std::vector<double> a(nn2);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    const double an = static_cast<double>(n);
    const double an25 = an + 0.25;
    double summ2 = 0.0;
    for (std::size_t i = 1; i <= nn2; ++i) {
      a[i - 1] = normal_quantile((static_cast<double>(i) - 0.375) / an25);
      summ2 += a[i - 1] * a[i - 1];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, 6, rsn) - a[0] / ssumm2;

    std::size_t first_plain;
    double fac;
    if (n > 5) {
      first_plain = 2;
      const double a2 = -a[1] / ssumm2 + poly(c2, 6, rsn);
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first_plain = 1;
      fac = std::sqrt((summ2 - 2.0 * a[0] * a[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_plain; i < nn2; ++i) a[i] = -a[i] / fac;
  }

  // W is the squared correlation between the sorted sample and the
  // antisymmetric weight vector; data are scaled by the range for stability.
  auto weight = [&](std::size_t i) -> double {
    const std::size_t j = n - 1 - i;
    if (i < j) return -a[i];
    if (i > j) return a[j];
    return 0.0;
  };
  double sa = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += weight(i);
    sx += xs[i] / range;
  }
  sa /= static_cast<double>(n);
  sx /= static_cast<double>(n);
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double asa = weight(i) - sa;
    const double xsx = xs[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

  ShapiroWilk out;
  out.w = 1.0 - w1;

  if (n == 3) {
    const double pi6 = 1.90985931710274;   // 6 / pi
    const double stqr = 1.04719755119660;  // asin(sqrt(3/4))
    double pw = pi6 * (std::asin(std::sqrt(out.w)) - stqr);
    out.p_value = std::clamp(pw, 0.0, 1.0);
    return out;
  }

  const double an = static_cast<double>(n);
  double y = std::log(1.0 - out.w);
  double m, s;
  if (n <= 11) {
    const double gamma = -2.273 + 0.459 * an;
    if (y >= gamma) {
      out.p_value = 0.0;
      return out;
    }
    y = -std::log(gamma - y);
    m = poly(c3, 4, an);
    s = std::exp(poly(c4, 4, an));
  } else {
    const double logn = std::log(an);
    m = poly(c5, 4, logn);
    s = std::exp(poly(c6, 3, logn));
  }
  out.p_value = 0.5 * std::erfc((y - m) / s / std::sqrt(2.0));
  return out;
}

}  // namespace ics
