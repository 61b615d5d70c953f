#include "simplex.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <mutex>

#include "ics/errors.hpp"

namespace ics {

namespace {

struct Callback {
  const std::function<double(std::span<const double>)>* objective;
  std::vector<double> buf;
};

// Non-finite objective values are mapped to a huge finite penalty; GSL's
// simplex update misbehaves on NaN/Inf.
double eval(const gsl_vector* v, void* params) {
  auto* cb = static_cast<Callback*>(params);
  for (std::size_t i = 0; i < v->size; ++i) cb->buf[i] = gsl_vector_get(v, i);
  const double f = (*cb->objective)(cb->buf);
  return std::isfinite(f) ? f : 1e100;
}

}  // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::span<const double> x0, std::span<const double> step,
                          const SimplexOptions& options) {
  static std::once_flag handler_off;
  std::call_once(handler_off, [] { gsl_set_error_handler_off(); });

  const std::size_t dim = x0.size();
  if (dim == 0 || step.size() != dim) {
    throw UsageError("simplex: dimension mismatch between start and step");
  }

  Callback cb{&objective, std::vector<double>(dim)};

  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* st = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(st, i, step[i]);
  }

  gsl_multimin_function func;
  func.n = dim;
  func.f = &eval;
  func.params = &cb;

  gsl_multimin_fminimizer* minimizer =
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  SimplexResult result;
  if (!minimizer ||
      gsl_multimin_fminimizer_set(minimizer, &func, x, st) != GSL_SUCCESS) {
    if (minimizer) gsl_multimin_fminimizer_free(minimizer);
    gsl_vector_free(x);
    gsl_vector_free(st);
    throw NumericalError("simplex: minimizer setup failed");
  }

  double f_prev = minimizer->fval;
  int stall = 0;
  int iter = 0;
  while (iter < options.max_iterations) {
    ++iter;
    const int status = gsl_multimin_fminimizer_iterate(minimizer);
    if (status == GSL_ENOPROG) {
      result.converged = true;  // simplex cannot improve further
      break;
    }
    if (status != GSL_SUCCESS) break;

    const double size = gsl_multimin_fminimizer_size(minimizer);
    if (gsl_multimin_test_size(size, options.size_tol) == GSL_SUCCESS) {
      result.converged = true;
      break;
    }
    const double f_now = minimizer->fval;
    if (f_prev - f_now <= options.f_rel_tol * (1.0 + std::fabs(f_now))) {
      if (++stall >= options.patience) {
        result.converged = true;
        break;
      }
    } else {
      stall = 0;
    }
    f_prev = f_now;
  }

  result.iterations = iter;
  result.f = minimizer->fval;
  result.x.resize(dim);
  const gsl_vector* best = gsl_multimin_fminimizer_x(minimizer);
  for (std::size_t i = 0; i < dim; ++i) result.x[i] = gsl_vector_get(best, i);

  gsl_multimin_fminimizer_free(minimizer);
  gsl_vector_free(x);
  gsl_vector_free(st);
  return result;
}

}  // namespace ics
