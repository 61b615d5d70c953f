#include "ics/reversibility.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ics/errors.hpp"
#include "ics/parallel.hpp"

namespace ics {

int rule_of_thumb_block(std::size_t n) {
  if (n < 23) {
    throw DataError("sample too short for rule of thumb (need n >= 23, got " +
                    std::to_string(n) + ")");
  }
  const double nd = static_cast<double>(n);
  const double bound = 2.0 * std::cbrt(nd * nd);  // 2 n^(2/3)
  int b = 0;
  for (int j = 4; j <= 8; ++j) {
    const double p = static_cast<double>(1 << j);
    if (p <= bound * (1.0 + 1e-12)) b = 1 << j;
  }
  return b;
}

double test_statistic(const IcsSurface& surface) {
  double max_abs = 0.0;
  for (const auto& v : surface.values()) {
    const double a = std::fabs(v.imag());
    if (a > max_abs) max_abs = a;
  }
  return std::sqrt(static_cast<double>(surface.window_length())) * max_abs;
}

TestReport subsample_test(const Series& x, const SubsampleConfig& config) {
  const std::size_t n = x.size();
  const int b = config.block > 0 ? config.block : rule_of_thumb_block(n);
  if (static_cast<std::size_t>(b) >= n) {
    throw UsageError("block length " + std::to_string(b) +
                     " must be smaller than the sample size " + std::to_string(n));
  }
  if (config.stride < 1) throw UsageError("stride must be >= 1");
  const std::size_t bs = static_cast<std::size_t>(b);

  TestReport report;
  report.n = n;
  report.block = b;
  report.stride = config.stride;
  report.strict = config.strict;

  // Full-sample statistic and maximizer.
  SpectrumEngine full_engine(n, config.grid);
  const SurfaceMax mx = full_engine.max_abs_imag(x.values());
  report.statistic = std::sqrt(static_cast<double>(n)) * mx.max_abs_imag;
  report.argmax = {mx.lambda_idx,
                   mx.tau1_idx,
                   mx.tau2_idx,
                   config.grid.lambdas()[mx.lambda_idx],
                   config.grid.taus()[mx.tau1_idx],
                   config.grid.taus()[mx.tau2_idx]};

  // Block statistics over every stride-th start, each with ranks local to
  // its own window.  Slot-indexed writes keep the result independent of the
  // worker count.
  const std::size_t n_starts = (n - bs) / static_cast<std::size_t>(config.stride) + 1;
  report.block_stats.assign(n_starts, 0.0);
  const double scale = std::sqrt(static_cast<double>(b)) /
                       std::sqrt(1.0 - static_cast<double>(b) / static_cast<double>(n));

  int workers = config.workers < 1 ? 1 : config.workers;
  std::vector<std::unique_ptr<SpectrumEngine>> engines;
  const int engine_count = std::min<std::size_t>(workers, n_starts);
  for (int w = 0; w < engine_count; ++w) {
    engines.push_back(std::make_unique<SpectrumEngine>(bs, config.grid));
  }

  const std::span<const double> values = x.values();
  parallel_for(n_starts, workers, [&](std::size_t worker, std::size_t i) {
    const std::size_t start = i * static_cast<std::size_t>(config.stride);
    const SurfaceMax bm = engines[worker]->max_abs_imag(values.subspan(start, bs));
    report.block_stats[i] = scale * bm.max_abs_imag;
  });

  std::size_t exceed = 0;
  for (double t : report.block_stats) {
    if (config.strict ? (t > report.statistic) : (t >= report.statistic)) ++exceed;
  }
  report.p_value = static_cast<double>(exceed) / static_cast<double>(n_starts);
  return report;
}

bool reject(const TestReport& report, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw UsageError("significance level must lie in (0, 1)");
  }
  return report.p_value < alpha;
}

}  // namespace ics
