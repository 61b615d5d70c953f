#pragma once

#include <cstddef>
#include <vector>

namespace ics {

// Rectangular evaluation grid for the integrated copula spectrum: frequencies
// lambda in [0, pi] crossed with quantile levels tau in (0, 1).  Surfaces are
// evaluated at (lambda, tau1, tau2) for every pair of quantile levels.
class EvaluationGrid {
 public:
  EvaluationGrid(std::vector<double> lambdas, std::vector<double> taus);

  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::vector<double>& taus() const { return taus_; }
  std::size_t n_lambda() const { return lambdas_.size(); }
  std::size_t n_tau() const { return taus_.size(); }

  // Number of (lambda, tau1, tau2) evaluation points.
  std::size_t size() const { return lambdas_.size() * taus_.size() * taus_.size(); }

 private:
  std::vector<double> lambdas_;
  std::vector<double> taus_;
};

// Equally spaced grid: n_lambda frequencies covering [0, pi] inclusive and
// n_tau interior quantile levels j / (n_tau + 1).  Requires n_lambda >= 2 and
// n_tau >= 1.
EvaluationGrid make_grid(int n_lambda, int n_tau);

// The default grid: 17 frequencies (step pi/16) by 31 quantile levels
// (1/32 ... 31/32), i.e. 17 * 31 * 31 = 16337 evaluation points.
const EvaluationGrid& default_grid();

}  // namespace ics
