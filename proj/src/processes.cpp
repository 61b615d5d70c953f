#include "ics/processes.hpp"

#include <cmath>
#include <vector>

#include "ics/distributions.hpp"
#include "ics/errors.hpp"

namespace ics {

SimModel parse_sim_model(const std::string& name) {
  if (name == "pbar" || name == "PBAR") return SimModel::pbar;
  if (name == "nbar" || name == "NBAR") return SimModel::nbar;
  if (name == "qar1" || name == "QAR1" || name == "qar" || name == "QAR") {
    return SimModel::qar1;
  }
  throw UsageError("unknown simulation model '" + name + "' (pbar, nbar, qar1)");
}

std::string sim_model_name(SimModel model) {
  switch (model) {
    case SimModel::pbar: return "pbar";
    case SimModel::nbar: return "nbar";
    case SimModel::qar1: return "qar1";
  }
  return "?";
}

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw UsageError(std::string(what) + " must lie in [0, 1]");
  }
}

}  // namespace

double pbar_step(double x_prev, double u, double w) {
  check_unit(x_prev, "state");
  check_unit(u, "innovation");
  check_unit(w, "mixing weight");
  return 1.0 - u * (1.0 - w * x_prev);
}

double nbar_step(double x_prev, double u, double w) {
  check_unit(x_prev, "state");
  check_unit(u, "innovation");
  check_unit(w, "mixing weight");
  return u * (1.0 - w * x_prev);
}

double qar_step(double x_prev, double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw UsageError("QAR innovation must lie strictly inside (0, 1)");
  }
  return 0.1 * normal_quantile(u) + 1.9 * (u - 0.5) * x_prev;
}

Series simulate(const SimSpec& spec) {
  if (spec.n < 2) throw UsageError("simulation length must be at least 2");
  RngStream rng(spec.seed, spec.stream);

  double x;
  if (spec.model == SimModel::qar1) {
    x = 0.0;
  } else {
    x = rng.uniform();  // X0 ~ U(0,1)
  }

  const std::size_t total = spec.burn_in + spec.n;
  std::vector<double> out;
  out.reserve(spec.n);
  for (std::size_t t = 0; t < total; ++t) {
    switch (spec.model) {
      case SimModel::pbar: {
        const double u = std::sqrt(rng.uniform());  // Beta(2,1)
        const double w = rng.uniform();             // Beta(1,1)
        x = pbar_step(x, u, w);
        break;
      }
      case SimModel::nbar: {
        const double u = std::sqrt(rng.uniform());
        const double w = rng.uniform();
        x = nbar_step(x, u, w);
        break;
      }
      case SimModel::qar1:
        x = qar_step(x, rng.uniform());
        break;
    }
    if (t >= spec.burn_in) out.push_back(x);
  }
  return Series(std::move(out), sim_model_name(spec.model));
}

}  // namespace ics
