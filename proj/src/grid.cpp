#include "ics/grid.hpp"

#include <cmath>
#include <string>

#include "ics/errors.hpp"

namespace ics {

EvaluationGrid::EvaluationGrid(std::vector<double> lambdas, std::vector<double> taus)
    : lambdas_(std::move(lambdas)), taus_(std::move(taus)) {
  if (lambdas_.empty() || taus_.empty()) {
    throw UsageError("evaluation grid needs at least one lambda and one tau");
  }
  const double pi = std::acos(-1.0);
  double prev = -1.0;
  for (double l : lambdas_) {
    if (!(l >= 0.0 && l <= pi)) {
      throw UsageError("grid frequency " + std::to_string(l) + " outside [0, pi]");
    }
    if (l <= prev) throw UsageError("grid frequencies must be strictly increasing");
    prev = l;
  }
  prev = 0.0;
  for (double t : taus_) {
    if (!(t > 0.0 && t < 1.0)) {
      throw UsageError("grid quantile level " + std::to_string(t) + " outside (0, 1)");
    }
    if (t <= prev) throw UsageError("grid quantile levels must be strictly increasing");
    prev = t;
  }
}

EvaluationGrid make_grid(int n_lambda, int n_tau) {
  if (n_lambda < 2) throw UsageError("grid needs at least 2 frequencies");
  if (n_tau < 1) throw UsageError("grid needs at least 1 quantile level");
  const double pi = std::acos(-1.0);
  std::vector<double> lambdas(static_cast<std::size_t>(n_lambda));
  for (int i = 0; i < n_lambda; ++i) {
    lambdas[static_cast<std::size_t>(i)] = pi * i / (n_lambda - 1);
  }
  std::vector<double> taus(static_cast<std::size_t>(n_tau));
  for (int j = 1; j <= n_tau; ++j) {
    taus[static_cast<std::size_t>(j - 1)] = static_cast<double>(j) / (n_tau + 1);
  }
  return EvaluationGrid(std::move(lambdas), std::move(taus));
}

const EvaluationGrid& default_grid() {
  static const EvaluationGrid grid = make_grid(17, 31);
  return grid;
}

}  // namespace ics
