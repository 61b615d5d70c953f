#include "ics/distributions.hpp"

#include <cmath>
#include <string>

#include "ics/errors.hpp"

namespace ics {

namespace {

// Horner evaluation of a degree-7 rational in r.
double ratio7(const double* num, const double* den, double r) {
  double p = num[7];
  for (int i = 6; i >= 0; --i) p = p * r + num[i];
  double q = den[7];
  for (int i = 6; i >= 0; --i) q = q * r + den[i];
  return p / q;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw UsageError("normal quantile requires p in (0, 1), got " + std::to_string(p));
  }

  // Wichura (1988), algorithm PPND16.
  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4,  4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4,  2.5090809287301226727e3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3,  2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4,  5.2264952788528545610e3};
  static const double c[8] = {
      1.42343711074968357734e0,  4.63033784615654529590e0,
      5.76949722146069140550e0,  3.64784832476320460504e0,
      1.27045825245236838258e0,  2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,
      2.05319162663775882187e0,  1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1,
      1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0,  5.46378491116411436990e0,
      1.78482653991729133580e0,  2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,
      5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4,
      1.84631831751005468180e-6, 1.42151175831644588870e-9,
      2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * ratio7(a, b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    x = ratio7(c, d, r - 1.6);
  } else {
    x = ratio7(e, f, r - 5.0);
  }
  return q < 0.0 ? -x : x;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double chi_squared_sf(double x, int df) {
  if (df < 1) throw UsageError("chi-squared df must be >= 1, got " + std::to_string(df));
  if (!(x > 0.0)) return 1.0;

  // Upper tail Q_k(x) obeys Q_{k+2} = Q_k + (x/2)^{k/2} e^{-x/2} / Gamma(k/2 + 1),
  // with Q_1 = erfc(sqrt(x/2)) and Q_2 = e^{-x/2}.
  const double half = 0.5 * x;
  double q, term;
  int k;
  if (df % 2 == 1) {
    q = std::erfc(std::sqrt(half));
    term = std::sqrt(2.0 * x / std::acos(-1.0)) * std::exp(-half);  // k = 1 increment
    k = 1;
  } else {
    q = std::exp(-half);
    term = half * std::exp(-half);  // k = 2 increment
    k = 2;
  }
  while (k < df) {
    q += term;
    term *= half / (0.5 * k + 1.0);
    k += 2;
  }
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

double student_t_log_pdf(double x, double nu) {
  if (!(nu > 0.0)) throw UsageError("Student-t df must be positive");
  const double pi = std::acos(-1.0);
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * pi) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

}  // namespace ics
