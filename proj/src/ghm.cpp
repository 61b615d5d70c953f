#include "ics/ghm.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "ics/distributions.hpp"
#include "ics/parallel.hpp"
#include "ics/rng.hpp"
#include "simplex.hpp"

namespace ics {

// ---------------------------------------------------------------------------
// Step 1: least-squares AR fitting and BIC order selection
// ---------------------------------------------------------------------------

ArFit fit_ar_ols(const Series& x, int p) {
  if (p < 0) throw UsageError("AR order must be nonnegative");
  const std::size_t n = x.size();
  const std::size_t pu = static_cast<std::size_t>(p);
  if (n < pu + 2) {
    throw DataError("series too short for AR(" + std::to_string(p) + ")");
  }
  const std::size_t rows = n - pu;
  const std::size_t cols = pu + 1;

  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd target(rows);
  for (std::size_t t = pu; t < n; ++t) {
    const std::size_t row = t - pu;
    design(row, 0) = 1.0;
    for (std::size_t i = 1; i <= pu; ++i) design(row, i) = x[t - i];
    target(row) = x[t];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < static_cast<Eigen::Index>(cols)) {
    throw NumericalError("AR(" + std::to_string(p) +
                         ") design is singular (constant or degenerate series)");
  }
  const Eigen::VectorXd beta = qr.solve(target);
  const Eigen::VectorXd resid = target - design * beta;

  ArFit fit;
  fit.order = p;
  fit.intercept = beta(0);
  fit.coefficients.assign(beta.data() + 1, beta.data() + cols);
  fit.residuals.assign(resid.data(), resid.data() + rows);
  fit.sigma2 = resid.squaredNorm() / static_cast<double>(rows);
  if (!(fit.sigma2 > 0.0)) {
    throw NumericalError("AR(" + std::to_string(p) +
                         ") residual variance is zero (constant or deterministic series)");
  }
  const double two_pi = 2.0 * std::acos(-1.0);
  fit.loglik = -0.5 * static_cast<double>(rows) * (std::log(two_pi * fit.sigma2) + 1.0);
  fit.bic = -2.0 * fit.loglik + (p + 2.0) * std::log(static_cast<double>(rows));
  return fit;
}

ArFit fit_ar_bic(const Series& x, int p_max) {
  if (p_max < 0) throw UsageError("p_max must be nonnegative");
  if (x.size() <= 2 * static_cast<std::size_t>(p_max)) {
    throw DataError("series too short for BIC order selection up to p = " +
                    std::to_string(p_max));
  }
  ArFit best;
  bool have = false;
  for (int p = 0; p <= p_max; ++p) {
    ArFit fit = fit_ar_ols(x, p);
    if (!have || fit.bic < best.bic) {  // ties keep the smaller order
      best = std::move(fit);
      have = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Durbin-Levinson maps between pacf and AR coefficients
// ---------------------------------------------------------------------------

std::vector<double> pacf_to_ar(std::span<const double> pacf) {
  const std::size_t p = pacf.size();
  std::vector<double> phi(p, 0.0), prev(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    const double pk = pacf[k];
    if (!(pk > -1.0 && pk < 1.0)) {
      throw UsageError("partial autocorrelations must lie in (-1, 1)");
    }
    for (std::size_t j = 0; j < k; ++j) phi[j] = prev[j] - pk * prev[k - 1 - j];
    phi[k] = pk;
    std::copy(phi.begin(), phi.begin() + static_cast<long>(k) + 1, prev.begin());
  }
  return phi;
}

std::vector<double> ar_to_pacf(std::span<const double> coefficients) {
  const std::size_t p = coefficients.size();
  std::vector<double> pacf(p, 0.0);
  std::vector<double> work(coefficients.begin(), coefficients.end()), prev(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    const double pk = work[k];
    if (!(pk > -1.0 && pk < 1.0)) {
      throw NumericalError("coefficient vector is not stationary/invertible");
    }
    pacf[k] = pk;
    const double denom = 1.0 - pk * pk;
    for (std::size_t j = 0; j < k; ++j) {
      prev[j] = (work[j] + pk * work[k - 1 - j]) / denom;
    }
    std::copy(prev.begin(), prev.begin() + static_cast<long>(k), work.begin());
  }
  return pacf;
}

// ---------------------------------------------------------------------------
// MAR(r, s) Student-t likelihood
// ---------------------------------------------------------------------------

namespace {

constexpr double kBadObjective = 1e100;

double clamped_atanh(double v) {
  const double c = std::clamp(v, -0.995, 0.995);
  return std::atanh(c);
}

// Parameter layout (unrestricted): [mu, tphi_1..tphi_r, tpsi_1..tpsi_s,
// log sigma, log(nu - 2)].  Restricted: [mu, t_1..t_q, log sigma,
// log(nu - 2)] with one shared coefficient block.
struct MarObjective {
  std::span<const double> x;
  int r = 0;
  int s = 0;
  bool restricted = false;

  std::size_t dim() const {
    return restricted ? static_cast<std::size_t>(r) + 3
                      : static_cast<std::size_t>(r + s) + 3;
  }

  // Expands theta into model parameters; returns false on overflow.
  bool unpack(std::span<const double> theta, MarModel* model) const {
    const std::size_t q = static_cast<std::size_t>(r);
    const std::size_t su = static_cast<std::size_t>(s);
    model->r = r;
    model->s = s;
    model->restricted = restricted;
    model->mu = theta[0];
    std::vector<double> pk;
    if (restricted) {
      pk.assign(theta.begin() + 1, theta.begin() + 1 + static_cast<long>(q));
      for (double& v : pk) v = std::tanh(v);
      model->causal = pacf_to_ar(pk);
      model->noncausal = model->causal;
    } else {
      pk.assign(theta.begin() + 1, theta.begin() + 1 + static_cast<long>(q));
      for (double& v : pk) v = std::tanh(v);
      model->causal = pacf_to_ar(pk);
      pk.assign(theta.begin() + 1 + static_cast<long>(q),
                theta.begin() + 1 + static_cast<long>(q + su));
      for (double& v : pk) v = std::tanh(v);
      model->noncausal = pacf_to_ar(pk);
    }
    const double log_sigma = theta[theta.size() - 2];
    const double log_nu2 = theta[theta.size() - 1];
    model->sigma = std::exp(log_sigma);
    model->nu = 2.0 + std::exp(log_nu2);
    return std::isfinite(model->sigma) && model->sigma > 0.0 && std::isfinite(model->nu);
  }

  double operator()(std::span<const double> theta) const {
    MarModel m;
    if (!unpack(theta, &m)) return kBadObjective;
    const double ll = loglik(m);
    return std::isfinite(ll) ? -ll : kBadObjective;
  }

  double loglik(const MarModel& m) const {
    const std::size_t n = x.size();
    const std::size_t ru = static_cast<std::size_t>(m.r);
    const std::size_t su = static_cast<std::size_t>(m.s);
    const double inv_sigma = 1.0 / m.sigma;
    const double nu = m.nu;
    const double pi = std::acos(-1.0);
    // Constant part of log f_nu(v / sigma) - log sigma, hoisted out of the sum.
    const double cnorm = std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
                         0.5 * std::log(nu * pi) - std::log(m.sigma);

    std::vector<double> y(n), u(n);
    for (std::size_t t = 0; t < n; ++t) y[t] = x[t] - m.mu;
    for (std::size_t t = ru; t < n; ++t) {
      double v = y[t];
      for (std::size_t i = 1; i <= ru; ++i) v -= m.causal[i - 1] * y[t - i];
      u[t] = v;
    }
    double ll = 0.0;
    const double half_nup1 = 0.5 * (nu + 1.0);
    for (std::size_t t = ru; t + su < n; ++t) {
      double v = u[t];
      for (std::size_t j = 1; j <= su; ++j) v -= m.noncausal[j - 1] * u[t + j];
      const double z = v * inv_sigma;
      ll += cnorm - half_nup1 * std::log1p(z * z / nu);
    }
    return ll;
  }
};

std::vector<double> theta_from_pacf(double mu, std::span<const double> pacf_causal,
                                    std::span<const double> pacf_noncausal,
                                    double sigma, double nu) {
  std::vector<double> theta;
  theta.reserve(pacf_causal.size() + pacf_noncausal.size() + 3);
  theta.push_back(mu);
  for (double v : pacf_causal) theta.push_back(clamped_atanh(v));
  for (double v : pacf_noncausal) theta.push_back(clamped_atanh(v));
  theta.push_back(std::log(std::max(sigma, 1e-8)));
  theta.push_back(std::log(std::max(nu - 2.0, 1e-3)));
  return theta;
}

// pacf of a coefficient vector, shrinking toward zero until the vector is
// inside the stationarity region (starting points only).
std::vector<double> safe_pacf(std::vector<double> coeffs) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return ar_to_pacf(coeffs);
    } catch (const NumericalError&) {
      for (double& c : coeffs) c *= 0.8;
    }
  }
  return std::vector<double>(coeffs.size(), 0.0);
}

// Inverse characteristic roots (eigenvalues of the companion matrix) of
// 1 - sum a_i z^i; the polynomial is stationary iff all of them lie inside
// the unit disk.
std::vector<std::complex<double>> inverse_roots(const std::vector<double>& a) {
  const std::size_t p = a.size();
  if (p == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t k = 0; k < p; ++k) companion(k, p - 1) = a[p - 1 - k];
  for (std::size_t k = 1; k < p; ++k) companion(k, k - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion);
  std::vector<std::complex<double>> roots(p);
  for (std::size_t k = 0; k < p; ++k) roots[k] = solver.eigenvalues()(k);
  return roots;
}

// Expands prod_k (1 - w_k z) and reads off AR coefficients a_i (real parts;
// imaginary parts cancel for conjugate-closed root sets).
std::vector<double> coeffs_from_inverse_roots(
    const std::vector<std::complex<double>>& roots) {
  std::vector<std::complex<double>> c{1.0};
  for (const auto& w : roots) {
    std::vector<std::complex<double>> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] -= w * c[k];
    }
    c = std::move(next);
  }
  std::vector<double> a(roots.size());
  for (std::size_t i = 1; i < c.size(); ++i) a[i - 1] = -c[i].real();
  return a;
}

// Conjugate-closed groups of the root list: complex-conjugate pairs stay
// together so every subset expands to a real polynomial.
std::vector<std::vector<std::size_t>> conjugate_groups(
    const std::vector<std::complex<double>>& roots) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::fabs(roots[i].imag()) <= 1e-8 * (1.0 + std::abs(roots[i]))) {
      groups.push_back({i});
      continue;
    }
    std::size_t partner = i;
    double best = std::numeric_limits<double>::max();
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(roots[j] - std::conj(roots[i]));
      if (d < best) {
        best = d;
        partner = j;
      }
    }
    if (partner != i) {
      used[partner] = true;
      groups.push_back({i, partner});
    } else {
      groups.push_back({i});  // unmatched; treat as real-ish
    }
  }
  return groups;
}

struct StartBuilder {
  const Series& x;
  int r, s;
  double mu0 = 0.0, sigma0 = 1.0, nu0 = 6.0;

  std::vector<std::vector<double>> build() {
    std::vector<std::vector<double>> starts;
    const std::size_t ru = static_cast<std::size_t>(r);
    const std::size_t su = static_cast<std::size_t>(s);

    mu0 = 0.0;
    for (double v : x.values()) mu0 += v;
    mu0 /= static_cast<double>(x.size());

    double sd = 0.0;
    for (double v : x.values()) sd += (v - mu0) * (v - mu0);
    sd = std::sqrt(sd / static_cast<double>(x.size()));
    sigma0 = sd > 0.0 ? sd : 1.0;

    const std::vector<double> zc(ru, 0.0), zn(su, 0.0);

    // Residual scale from the causal AR(r + s) least-squares fit; also the
    // source of the characteristic roots to split between the two sides.
    std::vector<std::complex<double>> roots;
    try {
      const ArFit base = fit_ar_ols(x, r + s);
      sigma0 = std::sqrt(base.sigma2);
      if (r + s > 0) {
        roots = inverse_roots(base.coefficients);
        for (auto& w : roots) {
          const double mod = std::abs(w);
          if (mod > 0.98) w *= 0.98 / mod;
        }
      }
    } catch (const std::exception&) {
      roots.clear();
    }

    starts.push_back(theta_from_pacf(mu0, zc, zn, sigma0, nu0));

    // Forward fit for the causal block, reversed-series fit for the
    // noncausal block.
    try {
      std::vector<double> pc = zc, pn = zn;
      if (r > 0) pc = safe_pacf(fit_ar_ols(x, r).coefficients);
      if (s > 0) pn = safe_pacf(fit_ar_ols(x.reversed(), s).coefficients);
      starts.push_back(theta_from_pacf(mu0, pc, pn, sigma0, nu0));
    } catch (const std::exception&) {
    }

    // Root splits: every conjugate-closed assignment of s roots to the
    // noncausal side (capped, deterministic order).
    if (!roots.empty()) {
      const auto groups = conjugate_groups(roots);
      const std::size_t n_groups = groups.size();
      int emitted = 0;
      for (std::uint32_t mask = 0; mask < (1u << n_groups) && emitted < 6; ++mask) {
        std::size_t chosen = 0;
        for (std::size_t g = 0; g < n_groups; ++g) {
          if (mask & (1u << g)) chosen += groups[g].size();
        }
        if (chosen != su) continue;
        std::vector<std::complex<double>> non, cau;
        for (std::size_t g = 0; g < n_groups; ++g) {
          for (std::size_t idx : groups[g]) {
            if (mask & (1u << g)) {
              non.push_back(roots[idx]);
            } else {
              cau.push_back(roots[idx]);
            }
          }
        }
        starts.push_back(theta_from_pacf(mu0, safe_pacf(coeffs_from_inverse_roots(cau)),
                                         safe_pacf(coeffs_from_inverse_roots(non)),
                                         sigma0, nu0));
        ++emitted;
      }
    }
    return starts;
  }
};

struct FitOutcome {
  std::vector<double> theta;
  double f = kBadObjective;
  bool converged = false;
};

FitOutcome run_multistart(const MarObjective& objective,
                          const std::vector<std::vector<double>>& starts,
                          const std::vector<double>& steps, std::uint64_t perturb_stream) {
  FitOutcome best;
  SimplexOptions scout;
  scout.max_iterations = 800;

  std::function<double(std::span<const double>)> f = std::cref(objective);
  for (const auto& start : starts) {
    const SimplexResult res = nelder_mead(f, start, steps, scout);
    if (res.f < best.f) best = {res.x, res.f, res.converged};
  }
  if (best.theta.empty()) return best;

  // Deterministic perturbation restarts around the incumbent.
  RngStream prng(0x4d41522dULL, perturb_stream);
  SimplexOptions probe;
  probe.max_iterations = 500;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> start = best.theta;
    for (double& v : start) v += 0.15 * (2.0 * prng.uniform() - 1.0);
    const SimplexResult res = nelder_mead(f, start, steps, probe);
    if (res.f < best.f) best = {res.x, res.f, res.converged};
  }

  // Final polish from the incumbent.
  SimplexOptions polish;
  polish.max_iterations = 4000;
  const SimplexResult res = nelder_mead(f, best.theta, steps, polish);
  if (res.f <= best.f) best = {res.x, res.f, res.converged};
  return best;
}

std::vector<double> step_sizes(const MarObjective& objective, double sigma0) {
  std::vector<double> steps(objective.dim(), 0.4);
  steps[0] = std::max(0.25 * sigma0, 1e-3);  // mu moves on the data scale
  steps[objective.dim() - 2] = 0.3;          // log sigma
  steps[objective.dim() - 1] = 0.6;          // log(nu - 2)
  return steps;
}

MarModel finish_fit(const MarObjective& objective, const FitOutcome& best,
                    std::size_t n, int k_params, int effective_n,
                    const std::string& what) {
  MarModel model;
  if (best.theta.empty() || best.f >= kBadObjective * 0.5) {
    objective.unpack(best.theta.empty() ? std::vector<double>(objective.dim(), 0.0)
                                        : best.theta,
                     &model);
    model.converged = false;
    throw MarFitError(what + ": no optimizer start reached a finite likelihood (n = " +
                          std::to_string(n) + ")",
                      model);
  }
  objective.unpack(best.theta, &model);
  model.loglik = -best.f;
  model.bic = -2.0 * model.loglik +
              static_cast<double>(k_params) * std::log(static_cast<double>(effective_n));
  model.converged = best.converged;
  return model;
}

}  // namespace

MarModel fit_mar_student(const Series& x, int r, int s) {
  if (r < 0 || s < 0) throw UsageError("MAR orders must be nonnegative");
  const std::size_t n = x.size();
  if (n <= static_cast<std::size_t>(r + s + 4)) {
    throw DataError("series too short for MAR(" + std::to_string(r) + ", " +
                    std::to_string(s) + ")");
  }

  MarObjective objective{x.values(), r, s, false};
  StartBuilder builder{x, r, s};
  const auto starts = builder.build();
  const auto steps = step_sizes(objective, builder.sigma0);
  const FitOutcome best = run_multistart(
      objective, starts, steps, (static_cast<std::uint64_t>(r) << 16) | static_cast<std::uint64_t>(s));
  return finish_fit(objective, best, n, r + s + 3, static_cast<int>(n) - r - s,
                    "MAR(" + std::to_string(r) + ", " + std::to_string(s) + ")");
}

MarModel fit_mar_student_restricted(const Series& x, int q) {
  if (q < 1) throw UsageError("restricted MAR needs q >= 1");
  const std::size_t n = x.size();
  if (n <= static_cast<std::size_t>(2 * q + 4)) {
    throw DataError("series too short for restricted MAR(" + std::to_string(q) + ", " +
                    std::to_string(q) + ")");
  }

  MarObjective objective{x.values(), q, q, true};

  // Starts: zero block, and the causal AR(q) fit's pacf shared by both sides.
  std::vector<std::vector<double>> starts;
  double mu0 = 0.0;
  for (double v : x.values()) mu0 += v;
  mu0 /= static_cast<double>(n);
  double sd = 0.0;
  for (double v : x.values()) sd += (v - mu0) * (v - mu0);
  sd = std::sqrt(sd / static_cast<double>(n));
  double sigma0 = sd > 0.0 ? sd : 1.0;

  const std::vector<double> zq(static_cast<std::size_t>(q), 0.0);
  const std::vector<double> none;
  std::vector<double> pacf_ols = zq;
  try {
    const ArFit base = fit_ar_ols(x, q);
    sigma0 = std::sqrt(base.sigma2);
    pacf_ols = safe_pacf(base.coefficients);
  } catch (const std::exception&) {
  }
  starts.push_back(theta_from_pacf(mu0, zq, none, sigma0, 6.0));
  starts.push_back(theta_from_pacf(mu0, pacf_ols, none, sigma0, 6.0));
  // Halved coefficients: the shared block acts on both sides, so the
  // two-sided response to one vector is roughly the square of one side's.
  std::vector<double> half = pacf_ols;
  for (double& v : half) v *= 0.5;
  starts.push_back(theta_from_pacf(mu0, half, none, sigma0, 6.0));

  const auto steps = step_sizes(objective, sigma0);
  const FitOutcome best = run_multistart(objective, starts, steps,
                                         0x52455354ULL + static_cast<std::uint64_t>(q));
  return finish_fit(objective, best, n, q + 3, static_cast<int>(n) - 2 * q,
                    "restricted MAR(" + std::to_string(q) + ", " + std::to_string(q) + ")");
}

// ---------------------------------------------------------------------------
// Decision pipeline
// ---------------------------------------------------------------------------

std::string verdict_name(Verdict v) {
  return v == Verdict::reversible ? "Reversible" : "Irreversible";
}

namespace {

// Re-optimizes the unrestricted candidate starting from the restricted
// optimum, so the nested pair satisfies L_unres >= L_res up to tolerance.
MarModel repolish_from_restricted(const Series& x, const MarModel& restricted_fit,
                                  const MarModel& current) {
  const int q = restricted_fit.r;
  MarObjective objective{x.values(), q, q, false};
  const std::vector<double> pacf_shared = safe_pacf(restricted_fit.causal);
  const std::vector<double> theta0 = theta_from_pacf(
      restricted_fit.mu, pacf_shared, pacf_shared, restricted_fit.sigma, restricted_fit.nu);
  std::vector<double> steps(objective.dim(), 0.05);
  steps[0] = std::max(0.05 * restricted_fit.sigma, 1e-4);
  SimplexOptions options;
  options.max_iterations = 3000;
  std::function<double(std::span<const double>)> f = std::cref(objective);
  const SimplexResult res = nelder_mead(f, theta0, steps, options);
  if (-res.f <= current.loglik) return current;

  MarModel improved;
  objective.unpack(res.x, &improved);
  improved.loglik = -res.f;
  improved.bic = -2.0 * improved.loglik +
                 (2.0 * q + 3.0) * std::log(static_cast<double>(x.size()) - 2.0 * q);
  improved.converged = res.converged || current.converged;
  return improved;
}

}  // namespace

GhmTrace ghm_decide(const Series& x, const GhmOptions& options) {
  if (options.strategy != 1 && options.strategy != 2) {
    throw UsageError("GHM strategy must be 1 or 2");
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw UsageError("significance level must lie in (0, 1)");
  }
  if (x.size() < 50) {
    throw DataError("GHM pipeline needs n >= 50, got " + std::to_string(x.size()));
  }

  GhmTrace trace;
  trace.strategy = options.strategy;
  trace.alpha = options.alpha;

  auto abort_with = [&trace](const std::string& message) -> GhmAbortedError {
    trace.error = message;
    return GhmAbortedError(message, trace);
  };

  // Step 1: AR order by BIC.
  try {
    trace.ar_fit = fit_ar_bic(x, options.p_max);
  } catch (const std::exception& e) {
    throw abort_with(std::string("step 1: ") + e.what());
  }
  const int p = trace.ar_fit->order;
  if (p == 0) {
    trace.verdict = Verdict::reversible;
    trace.exit_step = 1;
    trace.exit_reason = "iid selected";
    return trace;
  }

  // Step 2: normality of the AR residuals.
  try {
    trace.shapiro = shapiro_wilk(trace.ar_fit->residuals);
    trace.jarque_bera = jarque_bera(trace.ar_fit->residuals);
  } catch (const std::exception& e) {
    throw abort_with(std::string("step 2: ") + e.what());
  }
  const bool sw_ok = trace.shapiro->p_value >= options.alpha;
  const bool jb_ok = trace.jarque_bera->p_value >= options.alpha;
  const bool gaussian_ok =
      options.normality_rule == NormalityRule::both ? (sw_ok && jb_ok) : (sw_ok || jb_ok);
  if (gaussian_ok) {
    trace.verdict = Verdict::reversible;
    trace.exit_step = 2;
    trace.exit_reason = "Gaussian residuals not rejected";
    return trace;
  }

  // Step 3: fit every MAR(r, s) with r + s = P, P the next even order >= p.
  const int P = p % 2 == 0 ? p : p + 1;
  const std::size_t n_cand = static_cast<std::size_t>(P) + 1;
  trace.candidates.assign(n_cand, MarModel{});
  std::vector<std::string> failures(n_cand);
  parallel_for(n_cand, options.workers, [&](std::size_t, std::size_t i) {
    const int r = static_cast<int>(i);
    try {
      trace.candidates[i] = fit_mar_student(x, r, P - r);
    } catch (const MarFitError& e) {
      trace.candidates[i] = e.best_found;
      trace.candidates[i].converged = false;
      failures[i] = e.what();
    } catch (const std::exception& e) {
      trace.candidates[i].r = r;
      trace.candidates[i].s = P - r;
      trace.candidates[i].converged = false;
      failures[i] = e.what();
    }
  });

  std::size_t best_idx = n_cand;
  for (std::size_t i = 0; i < n_cand; ++i) {
    if (!trace.candidates[i].converged) continue;
    if (best_idx == n_cand || trace.candidates[i].loglik > trace.candidates[best_idx].loglik) {
      best_idx = i;
    }
  }
  if (best_idx == n_cand) {
    std::string detail;
    for (const auto& f : failures) {
      if (!f.empty()) detail += (detail.empty() ? "" : "; ") + f;
    }
    throw abort_with("step 3: no MAR candidate converged" +
                     (detail.empty() ? "" : " (" + detail + ")"));
  }
  trace.selected = best_idx;
  if (trace.candidates[best_idx].r != trace.candidates[best_idx].s) {
    trace.verdict = Verdict::irreversible;
    trace.exit_step = 3;
    trace.exit_reason = "max-likelihood MAR has r != s";
    return trace;
  }

  // Step 4: restricted fit with tied coefficient vectors.
  const int q = trace.candidates[best_idx].r;
  try {
    trace.restricted_fit = fit_mar_student_restricted(x, q);
  } catch (const std::exception& e) {
    throw abort_with(std::string("step 4: ") + e.what());
  }

  // Step 5: both decision rules, verdict per the requested strategy.  The
  // unrestricted fit is re-polished from the restricted optimum if needed so
  // the nested likelihoods are ordered up to optimizer tolerance.
  if (trace.candidates[best_idx].loglik < trace.restricted_fit->loglik + 1e-6) {
    trace.candidates[best_idx] =
        repolish_from_restricted(x, *trace.restricted_fit, trace.candidates[best_idx]);
  }
  const double l_unres = trace.candidates[best_idx].loglik;
  const double l_res = trace.restricted_fit->loglik;
  trace.bic_unrestricted_smaller =
      trace.candidates[best_idx].bic < trace.restricted_fit->bic;
  const double lrt = 2.0 * (l_unres - l_res);
  trace.lrt_statistic = lrt;
  trace.lrt_df = q;
  trace.lrt_p_value = chi_squared_sf(std::max(lrt, 0.0), q);

  const bool rejects = options.strategy == 1 ? *trace.bic_unrestricted_smaller
                                             : *trace.lrt_p_value < options.alpha;
  trace.verdict = rejects ? Verdict::irreversible : Verdict::reversible;
  trace.exit_step = 5;
  trace.exit_reason = options.strategy == 1
                          ? (rejects ? "unrestricted BIC strictly smaller"
                                     : "restricted BIC not beaten")
                          : (rejects ? "LRT rejects tied coefficients"
                                     : "LRT does not reject tied coefficients");
  return trace;
}

GhmTrace ghm_decide(const Series& x, int strategy, double alpha) {
  GhmOptions options;
  options.strategy = strategy;
  options.alpha = alpha;
  return ghm_decide(x, options);
}

Verdict verdict_for(const GhmTrace& trace, int strategy) {
  if (strategy != 1 && strategy != 2) throw UsageError("GHM strategy must be 1 or 2");
  if (trace.exit_step != 5) return trace.verdict;
  if (strategy == 1) {
    return *trace.bic_unrestricted_smaller ? Verdict::irreversible : Verdict::reversible;
  }
  return *trace.lrt_p_value < trace.alpha ? Verdict::irreversible : Verdict::reversible;
}

}  // namespace ics
