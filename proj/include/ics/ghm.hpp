#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ics/errors.hpp"
#include "ics/normality.hpp"
#include "ics/series.hpp"

namespace ics {

// ---------------------------------------------------------------------------
// Causal AR fitting (Step 1)
// ---------------------------------------------------------------------------

struct ArFit {
  int order = 0;
  double intercept = 0.0;
  std::vector<double> coefficients;  // phi_1..phi_p
  std::vector<double> residuals;     // n - p values
  double sigma2 = 0.0;               // ML residual variance
  double loglik = 0.0;               // Gaussian log-likelihood
  double bic = 0.0;                  // -2 loglik + (p + 2) log(n - p)
};

// Least-squares AR(p) with intercept on the n - p complete rows.
ArFit fit_ar_ols(const Series& x, int p);

// Minimum-BIC AR order over p = 0..p_max (ties break toward smaller p).
ArFit fit_ar_bic(const Series& x, int p_max = 5);

// ---------------------------------------------------------------------------
// Partial-autocorrelation parametrization of stationary AR coefficients
// ---------------------------------------------------------------------------
// The Durbin-Levinson recursion maps partial autocorrelations in (-1,1)^p
// one-to-one onto coefficient vectors whose polynomial 1 - sum phi_i z^i has
// all roots outside the unit circle.  Optimizing in pacf space (through
// tanh) enforces the root constraints by construction, for the causal and
// the noncausal polynomial alike.

std::vector<double> pacf_to_ar(std::span<const double> pacf);
std::vector<double> ar_to_pacf(std::span<const double> coefficients);

// ---------------------------------------------------------------------------
// Mixed causal/noncausal Student-t AR (Steps 3-4)
// ---------------------------------------------------------------------------

struct MarModel {
  int r = 0;                          // causal order
  int s = 0;                          // noncausal order
  double mu = 0.0;
  std::vector<double> causal;         // phi_1..phi_r
  std::vector<double> noncausal;      // psi_1..psi_s
  double sigma = 1.0;                 // > 0
  double nu = 6.0;                    // > 2
  double loglik = 0.0;
  double bic = 0.0;
  bool converged = false;
  bool restricted = false;            // Step-4 fit with causal == noncausal
};

// Thrown when no optimizer start yields a usable optimum; carries the best
// point seen so the caller can inspect it.
struct MarFitError : NumericalError {
  MarFitError(const std::string& message, MarModel best)
      : NumericalError(message), best_found(std::move(best)) {}
  MarModel best_found;
};

// Maximizes the approximate Student-t likelihood of the MAR(r, s) model
//   y_t = X_t - mu,  u_t = y_t - sum_i phi_i y_{t-i},
//   v_t = u_t - sum_j psi_j u_{t+j},
//   loglik = sum_{t} log[(1/sigma) f_nu(v_t / sigma)]
// over the n - r - s fully observed terms.  Multi-start Nelder-Mead in the
// pacf/tanh parametrization; nu optimized on log(nu - 2), sigma on log
// sigma.  BIC = -2 loglik + (r + s + 3) log(n - r - s).
MarModel fit_mar_student(const Series& x, int r, int s);

// Step-4 restricted model: r = s = q with the causal and noncausal
// coefficient vectors constrained equal.  BIC uses k = q + 3.
MarModel fit_mar_student_restricted(const Series& x, int q);

// ---------------------------------------------------------------------------
// Decision pipeline (Steps 1-5)
// ---------------------------------------------------------------------------

enum class Verdict { reversible, irreversible };

std::string verdict_name(Verdict v);

// Step-2 rule: with `both` (default), Gaussianity is "not rejected" only if
// both normality tests have p >= alpha; `either` accepts if at least one
// does.
enum class NormalityRule { both, either };

struct GhmOptions {
  int strategy = 1;  // 1 = BIC comparison, 2 = likelihood ratio test
  double alpha = 0.05;
  int p_max = 5;
  NormalityRule normality_rule = NormalityRule::both;
  int workers = 1;  // parallelism across candidate (r, s) fits
};

struct GhmTrace {
  int strategy = 1;
  double alpha = 0.05;

  std::optional<ArFit> ar_fit;              // Step 1
  std::optional<ShapiroWilk> shapiro;       // Step 2
  std::optional<JarqueBera> jarque_bera;    // Step 2
  std::vector<MarModel> candidates;         // Step 3, all (r, s) with r+s = P
  std::optional<std::size_t> selected;      // index of the max-loglik candidate
  std::optional<MarModel> restricted_fit;   // Step 4

  // Step 5 outcomes (both strategies are recorded when reached).
  std::optional<bool> bic_unrestricted_smaller;
  std::optional<double> lrt_statistic;
  std::optional<double> lrt_p_value;
  int lrt_df = 0;

  Verdict verdict = Verdict::reversible;
  int exit_step = 0;  // 1, 2, 3 or 5
  std::string exit_reason;
  std::optional<std::string> error;  // populated when the pipeline aborted
};

// Thrown when a fit inside the pipeline fails; carries the partial trace
// with `error` set.
struct GhmAbortedError : NumericalError {
  GhmAbortedError(const std::string& message, GhmTrace partial)
      : NumericalError(message), partial_trace(std::move(partial)) {}
  GhmTrace partial_trace;
};

GhmTrace ghm_decide(const Series& x, const GhmOptions& options);
GhmTrace ghm_decide(const Series& x, int strategy, double alpha = 0.05);

// Re-derives the verdict of `strategy` from a completed trace (exit steps
// 1-3 are strategy-independent; step 5 uses the stored outcomes).
Verdict verdict_for(const GhmTrace& trace, int strategy);

}  // namespace ics
