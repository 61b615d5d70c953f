#pragma once

#include "ics/series.hpp"

namespace ics {

struct HpConfig {
  double smoothing = 100.0;  // 100 for yearly data, 14400 for monthly
};

struct HpResult {
  Series trend;
  Series cycle;
};

// Hodrick-Prescott decomposition: the trend minimizes
//   sum_t (y_t - tau_t)^2 + smoothing * sum_t (d2 tau)_t^2
// over all trend paths, where d2 is the second difference.  Internally the
// normal equations are solved for the cycle c = y - tau,
//   (I + smoothing D'D) c = smoothing D'D y,
// with a banded Cholesky factorization (O(n), bandwidth 2).  Solving for the
// cycle makes affine inputs map to an exactly zero cycle: D'D y is exactly
// zero whenever consecutive second differences of y are exactly zero.
// Requires n >= 4 and smoothing >= 0.
HpResult hp_filter(const Series& y, const HpConfig& config);

}  // namespace ics
