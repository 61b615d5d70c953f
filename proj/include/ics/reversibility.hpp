#pragma once

#include <cstddef>
#include <vector>

#include "ics/copula_spectrum.hpp"
#include "ics/grid.hpp"
#include "ics/series.hpp"

namespace ics {

// Data-driven block length: the largest power of two 2^j with j in 4..8 that
// does not exceed 2 n^(2/3).  Needs n >= 23 so that 16 qualifies.  The
// comparison carries a 1e-12 relative slack so cube-root rounding cannot
// flip a boundary case.
int rule_of_thumb_block(std::size_t n);

struct SubsampleConfig {
  int block = 0;              // 0 = rule of thumb
  EvaluationGrid grid = default_grid();
  bool strict = true;         // strict ">" in the p-value count
  int stride = 1;             // evaluate every stride-th block start (speed experiments only)
  int workers = 1;
};

// Grid point location plus its coordinates, for reporting the maximizer.
struct GridPointRef {
  std::size_t lambda_idx = 0, tau1_idx = 0, tau2_idx = 0;
  double lambda = 0.0, tau1 = 0.0, tau2 = 0.0;
};

struct TestReport {
  std::size_t n = 0;
  int block = 0;
  double statistic = 0.0;          // sqrt(n) * max |Im| over the grid
  double p_value = 1.0;
  GridPointRef argmax;             // reported with tau1_idx <= tau2_idx
  std::vector<double> block_stats; // one per evaluated block start, in start order
  int stride = 1;
  bool strict = true;
};

// Scaled maximum sqrt(m) * max |Im surface| over the surface's whole grid,
// with m the window length behind the surface.
double test_statistic(const IcsSurface& surface);

// Full subsampling test: full-sample statistic, all overlapping length-b
// block statistics (block-local ranks, scaled by (1 - b/n)^(-1/2) sqrt(b)),
// and the p-value = #{block stat > T} / #blocks (">=" when strict is off).
TestReport subsample_test(const Series& x, const SubsampleConfig& config = {});

// Strict comparison: reject iff p_value < alpha.
bool reject(const TestReport& report, double alpha);

}  // namespace ics
