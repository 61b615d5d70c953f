#pragma once

namespace ics {

// Standard normal quantile (inverse CDF) for p in (0, 1).  Wichura's
// double-precision rational approximation, accurate to ~1 ulp over the full
// open interval.
double normal_quantile(double p);

// Standard normal CDF.
double normal_cdf(double x);

// Upper-tail probability P(X > x) of a chi-squared variable with integer
// df >= 1.  Closed-form tail recurrence: exact in terms of erfc/exp, no
// series truncation.
double chi_squared_sf(double x, int df);

// Log density of the Student-t distribution with nu > 0 degrees of freedom.
double student_t_log_pdf(double x, double nu);

}  // namespace ics
