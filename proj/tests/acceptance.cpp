// Acceptance harness: nine self-contained checks, one line of output each.
//
//   ics_acceptance               runs every criterion
//   ics_acceptance --criterion N runs one
//
// Exit code = number of failed criteria.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "ics/benchmark.hpp"
#include "ics/copula_spectrum.hpp"
#include "ics/datasets.hpp"
#include "ics/detrend.hpp"
#include "ics/distributions.hpp"
#include "ics/ghm.hpp"
#include "ics/grid.hpp"
#include "ics/processes.hpp"
#include "ics/reversibility.hpp"
#include "ics/rng.hpp"
#include "ics/series.hpp"

namespace {

struct Outcome {
  bool pass = false;
  bool skipped = false;
  std::string detail;
};

constexpr double kPi = 3.14159265358979323846;

std::vector<double> random_window(ics::RngStream& rng, std::size_t n, bool discretize) {
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform() * 4.0 - 2.0;
  if (discretize) {
    for (double& v : x) v = std::floor(v * 4.0) / 4.0;  // heavy ties
  }
  return x;
}

// ---------------------------------------------------------------------------
// Criterion 1: FFT surface against a direct summation oracle
// ---------------------------------------------------------------------------
// The oracle recomputes the surface from the definitions with integer
// threshold/cutoff arithmetic (tau = j/32, lambda = pi*i/16) and explicit
// trigonometric sums; no code is shared with the library path beyond the
// window itself.
Outcome criterion1() {
  const ics::EvaluationGrid grid = ics::default_grid();
  const std::size_t sizes[] = {16, 32, 48, 64};
  double worst = 0.0;
  ics::RngStream rng(20240811, 1);

  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t m = sizes[rep % 4];
    const std::vector<double> x = random_window(rng, m, rep % 5 == 4);

    const ics::IcsSurface surface = ics::integrated_spectrum(x, grid);

    // Ranks: 1-based count of values <= x[t].
    std::vector<long> counts(m, 0);
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t s = 0; s < m; ++s) {
        if (x[s] <= x[t]) ++counts[t];
      }
    }
    // Indicator rows for tau_j = j/32, j = 1..31:  counts <= j*m/32.
    std::vector<std::vector<double>> ind(31, std::vector<double>(m));
    for (long j = 1; j <= 31; ++j) {
      for (std::size_t t = 0; t < m; ++t) {
        ind[j - 1][t] = (32 * counts[t] <= j * static_cast<long>(m)) ? 1.0 : 0.0;
      }
    }
    // Direct DFTs for s = 0..m/2.
    const std::size_t half = m / 2;
    std::vector<std::vector<std::complex<double>>> dft(31);
    for (int j = 0; j < 31; ++j) {
      dft[j].resize(half + 1);
      for (std::size_t s = 0; s <= half; ++s) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < m; ++t) {
          const double angle = -2.0 * kPi * static_cast<double>(s) * static_cast<double>(t) /
                               static_cast<double>(m);
          acc += ind[j][t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        dft[j][s] = acc;
      }
    }
    // Integrated spectrum: (1/m^2) sum over s >= 1 with 2*pi*s/m <= lambda_i,
    // i.e. 32*s <= i*m for lambda_i = pi*i/16.
    const double inv_m2 = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
    for (std::size_t i = 0; i < 17; ++i) {
      for (int j1 = 0; j1 < 31; ++j1) {
        for (int j2 = 0; j2 < 31; ++j2) {
          std::complex<double> acc(0.0, 0.0);
          for (std::size_t s = 1; s <= half; ++s) {
            if (32 * s <= i * m) acc += dft[j1][s] * std::conj(dft[j2][s]);
          }
          const std::complex<double> want = acc * inv_m2;
          const std::complex<double> got = surface.at(i, j1, j2);
          worst = std::max(worst, std::abs(got - want));
        }
      }
    }
  }
  std::ostringstream detail;
  detail << "max |FFT - direct| = " << worst << " over 50 windows";
  return {worst <= 1e-9, false, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 2: structural invariants
// ---------------------------------------------------------------------------
Outcome criterion2() {
  const ics::EvaluationGrid grid = ics::default_grid();
  ics::RngStream rng(20240811, 2);
  double worst_diag = 0.0, worst_skew = 0.0;
  int transform_failures = 0, reversal_failures = 0;

  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 24 + static_cast<std::size_t>(rep);
    std::vector<double> x = random_window(rng, n, rep % 7 == 3);

    const ics::IcsSurface surface = ics::integrated_spectrum(x, grid);
    for (std::size_t l = 0; l < grid.n_lambda(); ++l) {
      for (std::size_t j1 = 0; j1 < grid.n_tau(); ++j1) {
        worst_diag = std::max(worst_diag, std::fabs(surface.at(l, j1, j1).imag()));
        for (std::size_t j2 = 0; j2 < grid.n_tau(); ++j2) {
          worst_skew = std::max(worst_skew, std::fabs(surface.at(l, j1, j2).imag() +
                                                      surface.at(l, j2, j1).imag()));
        }
      }
    }

    const ics::Series series(x);
    const ics::TestReport base = ics::subsample_test(series);

    // (c) strictly increasing transform, cycling three shapes.
    std::vector<double> g(n);
    for (std::size_t t = 0; t < n; ++t) {
      g[t] = rep % 3 == 0 ? std::exp(x[t]) : rep % 3 == 1 ? 3.0 * x[t] + 1.0 : std::atan(x[t]);
    }
    const ics::TestReport mapped = ics::subsample_test(ics::Series(g));
    const bool same_transform = mapped.statistic == base.statistic &&
                                mapped.p_value == base.p_value &&
                                mapped.block_stats == base.block_stats &&
                                mapped.argmax.lambda_idx == base.argmax.lambda_idx &&
                                mapped.argmax.tau1_idx == base.argmax.tau1_idx &&
                                mapped.argmax.tau2_idx == base.argmax.tau2_idx;
    if (!same_transform) ++transform_failures;

    // (d) time reversal: statistic and p-value exactly unchanged, block
    // statistics reversed in start order.
    const ics::TestReport rev = ics::subsample_test(series.reversed());
    bool same_reversal = rev.statistic == base.statistic && rev.p_value == base.p_value &&
                         rev.block_stats.size() == base.block_stats.size();
    if (same_reversal) {
      for (std::size_t t = 0; t < base.block_stats.size(); ++t) {
        if (rev.block_stats[t] != base.block_stats[base.block_stats.size() - 1 - t]) {
          same_reversal = false;
          break;
        }
      }
    }
    if (!same_reversal) ++reversal_failures;
  }

  std::ostringstream detail;
  detail << "max diag |Im| = " << worst_diag << ", max |Im(t1,t2)+Im(t2,t1)| = " << worst_skew
         << ", transform mismatches = " << transform_failures
         << ", reversal mismatches = " << reversal_failures;
  const bool pass = worst_diag <= 1e-12 && worst_skew <= 1e-12 && transform_failures == 0 &&
                    reversal_failures == 0;
  return {pass, false, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 3: rule-of-thumb block lengths
// ---------------------------------------------------------------------------
Outcome criterion3() {
  const std::pair<std::size_t, int> table[] = {
      {134, 32}, {1644, 256}, {1608, 256}, {852, 128}, {2016, 256}, {516, 128}};
  std::ostringstream detail;
  bool pass = true;
  for (const auto& [n, want] : table) {
    const int got = ics::rule_of_thumb_block(n);
    if (got != want) {
      pass = false;
      detail << " n=" << n << " gave " << got << " (want " << want << ");";
    }
  }
  if (pass) detail << "all tabulated (n, b) pairs reproduced";
  return {pass, false, detail.str()};
}

// ---------------------------------------------------------------------------
// Criteria 4-6: rejection-frequency studies
// ---------------------------------------------------------------------------
std::map<std::string, double> run_cells(const ics::BenchmarkSpec& spec) {
  std::map<std::string, double> out;
  for (const ics::BenchmarkCell& cell : ics::run_benchmark(spec)) {
    out[ics::sim_model_name(cell.model) + "/" + std::to_string(cell.n) + "/" +
        ics::method_name(cell.method)] = cell.frequency;
  }
  return out;
}

ics::BenchmarkSpec base_spec() {
  ics::BenchmarkSpec spec;
  spec.reps = 200;
  spec.alpha = 0.05;
  spec.seed = 1;
  const unsigned hw = std::thread::hardware_concurrency();
  spec.workers = hw == 0 ? 1 : static_cast<int>(hw);
  return spec;
}

Outcome criterion4() {
  ics::BenchmarkSpec spec = base_spec();
  spec.models = {ics::SimModel::pbar, ics::SimModel::nbar};
  spec.lengths = {200};
  spec.methods = {ics::Method::ics};
  const auto f = run_cells(spec);
  const double pbar = f.at("pbar/200/ics"), nbar = f.at("nbar/200/ics");
  std::ostringstream detail;
  detail << "rejection frequency at n=200: pbar " << pbar << ", nbar " << nbar
         << " (limit 0.08)";
  return {pbar <= 0.08 && nbar <= 0.08, false, detail.str()};
}

Outcome criterion5() {
  ics::BenchmarkSpec spec = base_spec();
  spec.models = {ics::SimModel::qar1};
  spec.lengths = {100, 200, 500};
  spec.methods = {ics::Method::ics};
  const auto f = run_cells(spec);
  const double f100 = f.at("qar1/100/ics"), f200 = f.at("qar1/200/ics"),
               f500 = f.at("qar1/500/ics");
  std::ostringstream detail;
  detail << "qar1 rejection frequency: n=100 " << f100 << ", n=200 " << f200 << ", n=500 "
         << f500;
  return {f500 >= 0.5 && f100 < f200 && f200 < f500, false, detail.str()};
}

Outcome criterion6() {
  ics::BenchmarkSpec spec = base_spec();
  spec.models = {ics::SimModel::qar1, ics::SimModel::pbar, ics::SimModel::nbar};
  spec.lengths = {200};
  spec.methods = {ics::Method::ics, ics::Method::ghm1, ics::Method::ghm2};
  const auto f = run_cells(spec);
  std::ostringstream detail;
  detail << "qar1: ics " << f.at("qar1/200/ics") << " vs ghm1 " << f.at("qar1/200/ghm1")
         << ", ghm2 " << f.at("qar1/200/ghm2") << "; pbar ghm1/ghm2 " << f.at("pbar/200/ghm1")
         << "/" << f.at("pbar/200/ghm2") << "; nbar ghm1/ghm2 " << f.at("nbar/200/ghm1") << "/"
         << f.at("nbar/200/ghm2") << " (envelope 0.08)";
  const bool power_direction = f.at("qar1/200/ghm1") < f.at("qar1/200/ics") &&
                               f.at("qar1/200/ghm2") < f.at("qar1/200/ics");
  const bool size_violation = f.at("pbar/200/ghm1") > 0.08 && f.at("pbar/200/ghm2") > 0.08 &&
                              f.at("nbar/200/ghm1") > 0.08 && f.at("nbar/200/ghm2") > 0.08;
  return {power_direction && size_violation, false, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 7: climate-table reproduction (data-contingent)
// ---------------------------------------------------------------------------
Outcome criterion7() {
  std::string dir;
  if (const char* env = std::getenv("ICS_DATA_DIR")) dir = env;
  if (dir.empty()) {
    const std::string fallback = std::string(ICS_REPO_DIR) + "/data/climate";
    if (std::filesystem::exists(fallback)) dir = fallback;
  }
  if (dir.empty() || !std::filesystem::exists(dir)) {
    return {true, true, "no dataset directory (set ICS_DATA_DIR); criteria 1-6 stand alone"};
  }

  const std::map<std::string, double> table = {
      {"GLO", 0.7480}, {"GL", 0.9320},  {"GO", 0.0291},      {"SA", 0.2910},
      {"GHG", 0.9900}, {"N2O", 0.9900}, {"GCAG", 0.4470},    {"GISTEMP", 0.4270},
      {"GMSL", 0.7910}, {"SOI", 0.5630}, {"NAO", 0.7810},    {"PDO", 0.7790},
      {"NH", 0.1490},  {"SH", 0.0000}};

  std::map<std::string, double> p_values;
  bool vintage_matches = true;
  std::ostringstream detail;
  for (const ics::DatasetEntry& entry : ics::registry()) {
    const std::string path = dir + "/" + entry.abbreviation + ".csv";
    if (!std::filesystem::exists(path)) {
      return {true, true, "missing " + path + "; criterion needs all 14 series"};
    }
    const ics::Series raw = ics::load_csv(path);
    std::string warning;
    const ics::Series prepared = ics::prepare(entry, raw, &warning);
    if (prepared.size() != entry.expected_n) vintage_matches = false;

    ics::SubsampleConfig config;
    config.block = entry.expected_b > 0 && static_cast<std::size_t>(entry.expected_b) <
                                               prepared.size()
                       ? entry.expected_b
                       : 0;
    const ics::TestReport report = ics::subsample_test(prepared, config);
    p_values[entry.abbreviation] = report.p_value;
  }

  bool pass = true;
  if (p_values.at("GO") >= 0.05) {
    pass = false;
    detail << " GO p=" << p_values.at("GO") << " not < 0.05;";
  }
  if (p_values.at("SH") > 0.001) {
    pass = false;
    detail << " SH p=" << p_values.at("SH") << " not <= 0.001;";
  }
  for (const auto& [abbr, p] : p_values) {
    if (abbr != "GO" && abbr != "SH" && p <= 0.05) {
      pass = false;
      detail << " " << abbr << " p=" << p << " not > 0.05;";
    }
  }
  if (vintage_matches) {
    for (const auto& [abbr, want] : table) {
      if (std::fabs(p_values.at(abbr) - want) > 0.02) {
        pass = false;
        detail << " " << abbr << " p=" << p_values.at(abbr) << " vs table " << want << ";";
      }
    }
    if (pass) detail << "all 14 p-values within 0.02 of the reference table";
  } else if (pass) {
    detail << "sign/threshold checks pass (vintage differs from the reference table)";
  }
  return {pass, false, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 8: Hodrick-Prescott filter
// ---------------------------------------------------------------------------
Outcome criterion8() {
  std::ostringstream detail;
  bool pass = true;

  // (a) exactly-affine input: zero cycle, bit for bit.
  {
    std::vector<double> y(40);
    for (std::size_t t = 0; t < y.size(); ++t) {
      y[t] = 0.5 + 0.25 * static_cast<double>(t);  // exactly representable
    }
    const ics::HpResult res = ics::hp_filter(ics::Series(y), {100.0});
    double worst = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
      worst = std::max(worst, std::fabs(res.cycle[t]));
    }
    if (worst != 0.0) {
      pass = false;
      detail << " affine cycle max |c| = " << worst << " (want exact 0);";
    }
  }

  // (b) dense-solver oracle on n <= 50.
  {
    ics::RngStream rng(20240811, 8);
    double worst = 0.0;
    for (const double lambda : {0.1, 100.0, 14400.0}) {
      for (const std::size_t n : {4ul, 7ul, 23ul, 50ul}) {
        std::vector<double> y(n);
        for (double& v : y) v = rng.uniform() * 10.0 - 5.0;

        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n - 2, n);
        for (std::size_t j = 0; j + 2 < n; ++j) {
          D(j, j) = 1.0;
          D(j, j + 1) = -2.0;
          D(j, j + 2) = 1.0;
        }
        const Eigen::MatrixXd A =
            Eigen::MatrixXd::Identity(n, n) + lambda * D.transpose() * D;
        const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
        const Eigen::VectorXd trend = A.ldlt().solve(yv);

        const ics::HpResult res = ics::hp_filter(ics::Series(y), {lambda});
        for (std::size_t t = 0; t < n; ++t) {
          worst = std::max(worst, std::fabs(res.trend[t] - trend(static_cast<long>(t))));
        }
      }
    }
    if (worst > 1e-9) {
      pass = false;
      detail << " dense-oracle max |trend diff| = " << worst << " (limit 1e-9);";
    } else {
      detail << " dense oracle max diff " << worst << ";";
    }
  }

  // (c) lambda -> infinity matches least-squares detrending.
  {
    ics::RngStream rng(20240811, 88);
    std::vector<double> y(40);
    for (double& v : y) v = rng.uniform() * 6.0 - 3.0;
    const std::size_t n = y.size();

    // OLS line fit via centered time index.
    double tbar = (static_cast<double>(n) - 1.0) / 2.0, ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double dt = static_cast<double>(t) - tbar;
      sxy += dt * (y[t] - ybar);
      sxx += dt * dt;
    }
    const double slope = sxy / sxx;

    const ics::HpResult res = ics::hp_filter(ics::Series(y), {1e10});
    double worst = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double line = ybar + slope * (static_cast<double>(t) - tbar);
      worst = std::max(worst, std::fabs(res.trend[t] - line));
    }
    if (worst > 1e-4) {
      pass = false;
      detail << " OLS-limit max |trend - line| = " << worst << " (limit 1e-4);";
    } else {
      detail << " OLS-limit max diff " << worst;
    }
  }
  return {pass, false, detail.str()};
}

// ---------------------------------------------------------------------------
// Criterion 9: model-based pipeline sanity
// ---------------------------------------------------------------------------
double student_t3(ics::RngStream& rng) {
  const double z0 = ics::normal_quantile(rng.uniform());
  double chi = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double z = ics::normal_quantile(rng.uniform());
    chi += z * z;
  }
  return z0 / std::sqrt(chi / 3.0);
}

Outcome criterion9() {
  const int runs = 100;
  int gaussian_reversible = 0, noncausal_irreversible = 0, qar_step1 = 0;

  for (int rep = 0; rep < runs; ++rep) {
    // Gaussian AR(2).
    {
      ics::RngStream rng(9100, static_cast<std::uint64_t>(rep));
      const std::size_t burn = 300, n = 1000;
      std::vector<double> x;
      x.reserve(burn + n);
      double x1 = 0.0, x2 = 0.0;
      for (std::size_t t = 0; t < burn + n; ++t) {
        const double next =
            0.5 * x1 - 0.3 * x2 + ics::normal_quantile(rng.uniform());
        x2 = x1;
        x1 = next;
        x.push_back(next);
      }
      x.erase(x.begin(), x.begin() + burn);
      const ics::GhmTrace trace = ics::ghm_decide(ics::Series(std::move(x)), 1);
      if (trace.verdict == ics::Verdict::reversible) ++gaussian_reversible;
    }

    // Purely noncausal AR(1) with Student-t(3) innovations:
    // X_t = 0.5 X_{t+1} + e_t, generated by backward recursion.
    {
      ics::RngStream rng(9200, static_cast<std::uint64_t>(rep));
      const std::size_t burn = 300, n = 1000;
      std::vector<double> x(burn + n, 0.0);
      for (std::size_t k = burn + n - 1; k-- > 0;) {
        x[k] = 0.5 * x[k + 1] + student_t3(rng);
      }
      x.resize(n);  // keep the earliest indices, far from the initialization
      try {
        const ics::GhmTrace trace = ics::ghm_decide(ics::Series(std::move(x)), 1);
        if (trace.verdict == ics::Verdict::irreversible) ++noncausal_irreversible;
      } catch (const ics::GhmAbortedError&) {
        // aborted fit counts as a miss
      }
    }

    // QAR1 should exit at Step 1 (BIC selects white noise).
    {
      ics::SimSpec spec;
      spec.model = ics::SimModel::qar1;
      spec.n = 500;
      spec.seed = 9300;
      spec.stream = static_cast<std::uint64_t>(rep);
      const ics::GhmTrace trace = ics::ghm_decide(ics::simulate(spec), 1);
      if (trace.exit_step == 1 && trace.verdict == ics::Verdict::reversible) ++qar_step1;
    }
  }

  std::ostringstream detail;
  detail << "Gaussian AR(2) reversible " << gaussian_reversible << "/100 (need >= 85), "
         << "noncausal t(3) irreversible " << noncausal_irreversible << "/100 (need > 50), "
         << "QAR1 step-1 reversible " << qar_step1 << "/100 (need > 50)";
  const bool pass = gaussian_reversible >= 85 && noncausal_irreversible > 50 && qar_step1 > 50;
  return {pass, false, detail.str()};
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: ics_acceptance [--criterion N]\n";
      return 1;
    }
  }
  if (selected < 0 || selected > 9) {
    std::cerr << "criterion must be 1..9\n";
    return 1;
  }

  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3,
                                               criterion4, criterion5, criterion6,
                                               criterion7, criterion8, criterion9};
  int failures = 0;
  for (int k = 1; k <= 9; ++k) {
    if (selected != 0 && selected != k) continue;
    Outcome outcome;
    try {
      outcome = criteria[k - 1]();
    } catch (const std::exception& e) {
      outcome = {false, false, std::string("exception: ") + e.what()};
    }
    const char* tag = outcome.pass ? (outcome.skipped ? "SKIP" : "PASS") : "FAIL";
    std::cout << "criterion " << k << ": " << tag << " — " << outcome.detail << '\n';
    if (!outcome.pass) ++failures;
  }
  return failures;
}
