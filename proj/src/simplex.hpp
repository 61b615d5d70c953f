#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ics {

// Derivative-free minimization via the Nelder-Mead simplex (GSL nmsimplex2).
// Internal building block for the Student-t likelihood fits.

struct SimplexOptions {
  int max_iterations = 5000;
  double size_tol = 1e-7;       // simplex size stopping criterion
  double f_rel_tol = 1e-8;      // relative objective-change criterion ...
  int patience = 25;            // ... sustained for this many iterations
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  bool converged = false;
  int iterations = 0;
};

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> x0, std::span<const double> step,
                          const SimplexOptions& options = {});

}  // namespace ics
