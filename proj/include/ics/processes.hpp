#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "ics/rng.hpp"
#include "ics/series.hpp"

namespace ics {

// Benchmark processes.  PBAR/NBAR are nonlinear beta-autoregressions that
// are time-reversible; QAR1 is an uncorrelated quantile autoregression that
// is time-irreversible.
enum class SimModel { pbar, nbar, qar1 };

SimModel parse_sim_model(const std::string& name);
std::string sim_model_name(SimModel model);

struct SimSpec {
  SimModel model = SimModel::pbar;
  std::size_t n = 0;
  std::size_t burn_in = 1000;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// One transition each.  u is the Beta(2,1) innovation and w the Beta(1,1)
// mixing weight for PBAR/NBAR; u is the uniform innovation for QAR1.
double pbar_step(double x_prev, double u, double w);
double nbar_step(double x_prev, double u, double w);
double qar_step(double x_prev, double u);

// Simulates spec.n observations after discarding spec.burn_in transitions.
// PBAR/NBAR start from X0 ~ U(0,1); QAR1 starts from 0.  Draw order per
// transition: innovation first, then (PBAR/NBAR only) the mixing weight;
// Beta(2,1) draws use the inverse transform sqrt(U).
Series simulate(const SimSpec& spec);

}  // namespace ics
