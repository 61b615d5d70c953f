#include "ics/copula_spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "ics/errors.hpp"
#include "ics/ranks.hpp"

namespace ics {

namespace {

// FFTW planning is not thread-safe, and plans for the handful of
// (row-count, window-length) shapes in play are reused across every engine
// and worker thread.  Plans are created with FFTW_UNALIGNED so they can be
// executed on any buffer via the new-array interface; execution itself is
// thread-safe.  Plans live for the whole process.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int rows, int len) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_pair(rows, len);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::vector<double> in(static_cast<std::size_t>(rows) * len);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(rows) * (len / 2 + 1));
    int n[1] = {len};
    fftw_plan plan = fftw_plan_many_dft_r2c(
        1, n, rows, in.data(), nullptr, 1, len,
        reinterpret_cast<fftw_complex*>(out.data()), nullptr, 1, len / 2 + 1,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw NumericalError("FFT planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace

struct SpectrumEngine::Impl {
  std::size_t m = 0;
  EvaluationGrid grid;
  std::vector<long> tau_thresholds;  // floor(tau * m), per quantile level
  std::vector<long> freq_cutoffs;    // per lambda: largest Fourier index in the sum
  fftw_plan plan = nullptr;          // owned by the cache
  std::vector<double> in;            // |taus| rows of length m
  std::vector<std::complex<double>> out;  // |taus| rows of length m/2+1

  Impl(std::size_t window_length, const EvaluationGrid& g)
      : m(window_length), grid(g) {
    if (m == 0) throw UsageError("window length must be positive");
    const double two_pi = 2.0 * std::acos(-1.0);
    tau_thresholds.reserve(grid.n_tau());
    for (double tau : grid.taus()) {
      tau_thresholds.push_back(floor_with_slack(tau * static_cast<double>(m)));
    }
    freq_cutoffs.reserve(grid.n_lambda());
    const long half = static_cast<long>(m / 2);
    for (double lambda : grid.lambdas()) {
      long s = floor_with_slack(lambda * static_cast<double>(m) / two_pi);
      freq_cutoffs.push_back(std::min(s, half));
    }
    plan = PlanCache::instance().get(static_cast<int>(grid.n_tau()), static_cast<int>(m));
    in.resize(grid.n_tau() * m);
    out.resize(grid.n_tau() * (m / 2 + 1));
  }

  // Evaluates the integrated spectrum of one window, streaming values to
  // sink(lambda_idx, tau1_idx, tau2_idx, value, flipped) for every pair with
  // tau1_idx <= tau2_idx and every frequency checkpoint.  `value` is the
  // integrated spectrum of the canonical orientation; when `flipped` the
  // caller conjugates it to recover the literal window's surface.  Both the
  // statistic path and the surface path run this exact arithmetic, so their
  // results agree bit-for-bit.
  template <typename Sink>
  void evaluate(std::span<const double> window, Sink&& sink) {
    if (window.size() != m) {
      throw UsageError("window length " + std::to_string(window.size()) +
                       " does not match engine length " + std::to_string(m));
    }
    const RankTransform ranks = ecdf_values(window);
    const std::vector<int>& c = ranks.counts;

    // Canonical orientation: evaluate whichever of (window, reversed window)
    // has the lexicographically smaller rank sequence.
    const bool flipped =
        std::lexicographical_compare(c.rbegin(), c.rend(), c.begin(), c.end());

    const std::size_t n_tau = grid.n_tau();
    for (std::size_t j = 0; j < n_tau; ++j) {
      const long thr = tau_thresholds[j];
      double* row = in.data() + j * m;
      if (flipped) {
        for (std::size_t t = 0; t < m; ++t) row[t] = c[m - 1 - t] <= thr ? 1.0 : 0.0;
      } else {
        for (std::size_t t = 0; t < m; ++t) row[t] = c[t] <= thr ? 1.0 : 0.0;
      }
    }

    fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));

    const std::size_t half = m / 2 + 1;
    const double inv_m2 = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    const std::size_t n_lambda = freq_cutoffs.size();
    const long s_max = freq_cutoffs.back();  // cutoffs ascend with lambda

    for (std::size_t j1 = 0; j1 < n_tau; ++j1) {
      const std::complex<double>* r1 = out.data() + j1 * half;
      for (std::size_t j2 = j1; j2 < n_tau; ++j2) {
        const std::complex<double>* r2 = out.data() + j2 * half;
        std::complex<double> cum(0.0, 0.0);
        std::size_t l = 0;
        while (l < n_lambda && freq_cutoffs[l] < 1) {
          sink(l, j1, j2, std::complex<double>(0.0, 0.0), flipped);
          ++l;
        }
        for (long s = 1; s <= s_max; ++s) {
          cum += r1[s] * std::conj(r2[s]);
          while (l < n_lambda && freq_cutoffs[l] == s) {
            sink(l, j1, j2, cum * inv_m2, flipped);
            ++l;
          }
        }
      }
    }
  }
};

SpectrumEngine::SpectrumEngine(std::size_t window_length, const EvaluationGrid& grid)
    : impl_(std::make_unique<Impl>(window_length, grid)) {}

SpectrumEngine::~SpectrumEngine() = default;

std::size_t SpectrumEngine::window_length() const { return impl_->m; }

SurfaceMax SpectrumEngine::max_abs_imag(std::span<const double> window) {
  SurfaceMax best;
  impl_->evaluate(window, [&best](std::size_t l, std::size_t j1, std::size_t j2,
                                  std::complex<double> v, bool) {
    if (j1 == j2) return;  // diagonal values are exactly real
    const double a = std::fabs(v.imag());
    if (a > best.max_abs_imag) best = {a, l, j1, j2};
  });
  return best;
}

IcsSurface SpectrumEngine::surface(std::span<const double> window,
                                   SurfaceProvenance provenance, std::size_t block_start) {
  IcsSurface out(impl_->grid, impl_->m, provenance, block_start);
  impl_->evaluate(window, [&out](std::size_t l, std::size_t j1, std::size_t j2,
                                 std::complex<double> v, bool flipped) {
    const std::complex<double> w = flipped ? std::conj(v) : v;
    out.at(l, j1, j2) = w;
    if (j2 != j1) out.at(l, j2, j1) = std::conj(w);
  });
  return out;
}

IcsSurface integrated_spectrum(std::span<const double> window, const EvaluationGrid& grid) {
  SpectrumEngine engine(window.size(), grid);
  return engine.surface(window);
}

CopulaDft copula_dft(std::span<const double> window, std::span<const double> taus) {
  const std::size_t m = window.size();
  if (m == 0) throw UsageError("copula DFT of an empty window");
  if (taus.empty()) throw UsageError("copula DFT needs at least one quantile level");

  const RankTransform ranks = ecdf_values(window);
  const IndicatorMatrix ind = indicator_matrix(ranks, taus);

  const std::size_t half = m / 2 + 1;
  std::vector<double> in(taus.size() * m);
  std::vector<std::complex<double>> out(taus.size() * half);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    for (std::size_t t = 0; t < m; ++t) {
      in[j * m + t] = static_cast<double>(ind.at(t, j));
    }
  }
  fftw_plan plan =
      PlanCache::instance().get(static_cast<int>(taus.size()), static_cast<int>(m));
  fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));

  CopulaDft dft;
  dft.window_length = m;
  dft.taus.assign(taus.begin(), taus.end());
  dft.coef.resize(taus.size() * m);
  for (std::size_t j = 0; j < taus.size(); ++j) {
    for (std::size_t s = 0; s < half; ++s) {
      dft.coef[j * m + s] = out[j * half + s];
    }
    for (std::size_t s = half; s < m; ++s) {
      dft.coef[j * m + s] = std::conj(out[j * half + (m - s)]);
    }
  }
  return dft;
}

std::complex<double> copula_periodogram(const CopulaDft& dft, std::size_t tau1_idx,
                                        std::size_t tau2_idx, std::size_t s) {
  const std::size_t m = dft.window_length;
  if (tau1_idx >= dft.taus.size() || tau2_idx >= dft.taus.size()) {
    throw UsageError("quantile index out of range in copula periodogram");
  }
  if (s >= m) throw UsageError("Fourier index out of range in copula periodogram");
  const double two_pi = 2.0 * std::acos(-1.0);
  const std::complex<double> d1 = dft.at(tau1_idx, s);
  const std::complex<double> d2 = dft.at(tau2_idx, (m - s) % m);
  return d1 * d2 / (two_pi * static_cast<double>(m));
}

}  // namespace ics
