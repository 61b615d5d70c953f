#include "ics/cli_commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ics/benchmark.hpp"
#include "ics/datasets.hpp"
#include "ics/errors.hpp"
#include "ics/ghm.hpp"
#include "ics/grid.hpp"
#include "ics/processes.hpp"
#include "ics/reversibility.hpp"
#include "ics/series.hpp"

namespace ics {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal representation, for CSV cells.
std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int effective_workers(int requested) {
  if (requested < 0) throw UsageError("worker count must be >= 0 (0 = all cores)");
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw UsageError("alpha must lie strictly between 0 and 1");
  }
}

// The only place a timestamp appears in any report; everything outside this
// block is a pure function of the run configuration.
ordered_json meta_block(const RunConfig& config) {
  ordered_json meta;
  meta["command"] = config.command;
  meta["generated_at"] = iso_timestamp();
  return meta;
}

void write_output(const RunConfig& config, const std::string& text) {
  const bool needs_newline = text.empty() || text.back() != '\n';
  if (config.output_path.empty()) {
    std::cout << text;
    if (needs_newline) std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(config.output_path, std::ios::binary);
  if (!out) throw DataError("cannot open output file: " + config.output_path);
  out << text;
  if (needs_newline) out << '\n';
  out.flush();
  if (!out) throw DataError("failed while writing output file: " + config.output_path);
}

Series load_input(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw UsageError("--input is required for the '" + config.command + "' command");
  }
  CsvSpec spec;
  spec.value_column = config.value_column;
  spec.date_column = config.date_column;
  return load_csv(config.input_path, spec);
}

ordered_json argmax_json(const GridPointRef& p) {
  ordered_json j;
  j["lambda"] = p.lambda;
  j["tau1"] = p.tau1;
  j["tau2"] = p.tau2;
  j["lambda_idx"] = p.lambda_idx;
  j["tau1_idx"] = p.tau1_idx;
  j["tau2_idx"] = p.tau2_idx;
  return j;
}

ordered_json report_json(const TestReport& report, double alpha, bool rejected) {
  ordered_json j;
  j["n"] = report.n;
  j["block"] = report.block;
  j["statistic"] = report.statistic;
  j["p_value"] = report.p_value;
  j["alpha"] = alpha;
  j["reject"] = rejected;
  j["decision"] = rejected ? "reject" : "do not reject";
  j["argmax"] = argmax_json(report.argmax);
  j["block_stats"] = report.block_stats;
  return j;
}

ordered_json ar_json(const ArFit& fit) {
  ordered_json j;
  j["order"] = fit.order;
  j["intercept"] = fit.intercept;
  j["coefficients"] = fit.coefficients;
  j["sigma2"] = fit.sigma2;
  j["loglik"] = fit.loglik;
  j["bic"] = fit.bic;
  j["residual_count"] = fit.residuals.size();
  return j;
}

ordered_json mar_json(const MarModel& model) {
  ordered_json j;
  j["r"] = model.r;
  j["s"] = model.s;
  j["mu"] = model.mu;
  j["causal"] = model.causal;
  j["noncausal"] = model.noncausal;
  j["sigma"] = model.sigma;
  j["nu"] = model.nu;
  j["loglik"] = model.loglik;
  j["bic"] = model.bic;
  j["converged"] = model.converged;
  j["restricted"] = model.restricted;
  return j;
}

ordered_json trace_json(const GhmTrace& trace) {
  ordered_json j;
  j["strategy"] = trace.strategy;
  j["alpha"] = trace.alpha;
  j["verdict"] = verdict_name(trace.verdict);
  j["exit_step"] = trace.exit_step;
  j["exit_reason"] = trace.exit_reason;
  if (trace.ar_fit) j["ar_fit"] = ar_json(*trace.ar_fit);
  if (trace.shapiro) {
    j["shapiro_wilk"] = ordered_json{{"w", trace.shapiro->w}, {"p_value", trace.shapiro->p_value}};
  }
  if (trace.jarque_bera) {
    j["jarque_bera"] = ordered_json{{"statistic", trace.jarque_bera->statistic},
                                    {"p_value", trace.jarque_bera->p_value},
                                    {"skewness", trace.jarque_bera->skewness},
                                    {"kurtosis", trace.jarque_bera->kurtosis}};
  }
  if (!trace.candidates.empty()) {
    ordered_json arr = ordered_json::array();
    for (const MarModel& m : trace.candidates) arr.push_back(mar_json(m));
    j["candidates"] = std::move(arr);
  }
  if (trace.selected) j["selected"] = *trace.selected;
  if (trace.restricted_fit) j["restricted_fit"] = mar_json(*trace.restricted_fit);
  if (trace.bic_unrestricted_smaller) j["bic_unrestricted_smaller"] = *trace.bic_unrestricted_smaller;
  if (trace.lrt_statistic) j["lrt_statistic"] = *trace.lrt_statistic;
  if (trace.lrt_p_value) j["lrt_p_value"] = *trace.lrt_p_value;
  if (trace.lrt_df > 0) j["lrt_df"] = trace.lrt_df;
  if (trace.error) j["error"] = *trace.error;
  return j;
}

NormalityRule parse_normality_rule(const std::string& name) {
  if (name == "both") return NormalityRule::both;
  if (name == "either") return NormalityRule::either;
  throw UsageError("normality rule must be 'both' or 'either', got '" + name + "'");
}

}  // namespace

int cmd_test(const RunConfig& config) {
  check_alpha(config.alpha);
  if (config.block < 0) throw UsageError("block length must be positive (0 = rule of thumb)");
  const Series x = load_input(config);

  SubsampleConfig sub;
  sub.block = config.block;
  sub.grid = make_grid(config.grid_lambdas, config.grid_taus);
  sub.workers = effective_workers(config.workers);
  const TestReport report = subsample_test(x, sub);

  // A zero statistic means the estimated imaginary surface vanishes
  // identically (degenerate input, e.g. a constant series); there is no
  // evidence to reject on, whatever the subsampling count says.
  const bool rejected = reject(report, config.alpha) && report.statistic > 0.0;

  ordered_json j;
  j["schema"] = "icsts/test-report/v1";
  j["meta"] = meta_block(config);
  j["input"] = config.input_path;
  j["label"] = x.label();
  ordered_json body = report_json(report, config.alpha, rejected);
  j.update(body);
  write_output(config, j.dump(2));
  return 0;
}

int cmd_ghm(const RunConfig& config) {
  check_alpha(config.alpha);
  const Series x = load_input(config);

  GhmOptions options;
  options.strategy = config.ghm_strategy;
  options.alpha = config.alpha;
  options.normality_rule = parse_normality_rule(config.normality_rule);
  options.workers = effective_workers(config.workers);

  ordered_json j;
  j["schema"] = "icsts/ghm-trace/v1";
  j["meta"] = meta_block(config);
  j["input"] = config.input_path;
  j["label"] = x.label();
  j["n"] = x.size();
  try {
    const GhmTrace trace = ghm_decide(x, options);
    j.update(trace_json(trace));
    write_output(config, j.dump(2));
    return 0;
  } catch (const GhmAbortedError& e) {
    j.update(trace_json(e.partial_trace));
    write_output(config, j.dump(2));
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

int cmd_simulate(const RunConfig& config) {
  if (config.sim_n < 2) throw UsageError("simulated length must be at least 2");
  SimSpec spec;
  spec.model = parse_sim_model(config.sim_model);
  spec.n = config.sim_n;
  spec.burn_in = config.burn_in;
  spec.seed = config.seed;
  spec.stream = 0;
  const Series x = simulate(spec);

  if (config.format == OutputFormat::csv) {
    std::ostringstream out;
    out << "t,value\n";
    for (std::size_t t = 0; t < x.size(); ++t) {
      out << t << ',' << fmt_double(x[t]) << '\n';
    }
    write_output(config, out.str());
    return 0;
  }

  ordered_json j;
  j["schema"] = "icsts/simulation/v1";
  j["meta"] = meta_block(config);
  j["model"] = sim_model_name(spec.model);
  j["n"] = spec.n;
  j["burn_in"] = spec.burn_in;
  j["seed"] = spec.seed;
  j["values"] = std::vector<double>(x.values().begin(), x.values().end());
  write_output(config, j.dump(2));
  return 0;
}

int cmd_benchmark(const RunConfig& config) {
  check_alpha(config.alpha);
  BenchmarkSpec spec;
  if (config.models.empty()) throw UsageError("--models needs at least one of pbar, nbar, qar1");
  for (const std::string& name : config.models) spec.models.push_back(parse_sim_model(name));
  if (config.lengths.empty()) throw UsageError("--lengths needs at least one sample size");
  spec.lengths = config.lengths;
  if (config.methods.empty()) throw UsageError("--methods needs at least one of ics, ghm1, ghm2");
  for (const std::string& name : config.methods) spec.methods.push_back(parse_method(name));
  spec.reps = config.reps;
  spec.alpha = config.alpha;
  spec.seed = config.seed;
  spec.burn_in = config.burn_in;
  spec.workers = effective_workers(config.workers);

  const std::vector<BenchmarkCell> cells = run_benchmark(spec);

  if (config.format == OutputFormat::csv) {
    std::ostringstream out;
    out << "model,n,method,reps,alpha,rejections,errors,frequency\n";
    for (const BenchmarkCell& cell : cells) {
      out << sim_model_name(cell.model) << ',' << cell.n << ',' << method_name(cell.method)
          << ',' << cell.reps << ',' << fmt_double(cell.alpha) << ',' << cell.rejections << ','
          << cell.errors << ',' << fmt_double(cell.frequency) << '\n';
    }
    write_output(config, out.str());
    return 0;
  }

  ordered_json j;
  j["schema"] = "icsts/benchmark/v1";
  j["meta"] = meta_block(config);
  j["reps"] = spec.reps;
  j["alpha"] = spec.alpha;
  j["seed"] = spec.seed;
  ordered_json rows = ordered_json::array();
  for (const BenchmarkCell& cell : cells) {
    ordered_json row;
    row["model"] = sim_model_name(cell.model);
    row["n"] = cell.n;
    row["method"] = method_name(cell.method);
    row["reps"] = cell.reps;
    row["rejections"] = cell.rejections;
    row["errors"] = cell.errors;
    row["frequency"] = cell.frequency;
    rows.push_back(std::move(row));
  }
  j["cells"] = std::move(rows);
  write_output(config, j.dump(2));
  return 0;
}

int cmd_climate(const RunConfig& config) {
  check_alpha(config.alpha);
  std::string dir = config.data_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("ICS_DATA_DIR")) dir = env;
  }
  if (dir.empty()) {
    throw UsageError("no data directory: pass --data-dir or set ICS_DATA_DIR");
  }
  const std::vector<DatasetEntry> entries =
      config.manifest_path.empty() ? registry() : load_manifest(config.manifest_path);
  if (entries.empty()) throw DataError("dataset registry is empty");
  const int workers = effective_workers(config.workers);

  struct Row {
    DatasetEntry entry;
    TestReport report;
    bool rejected = false;
    std::string warning;
    std::string ghm1, ghm2;  // verdict names or "error: ..."
  };
  std::vector<Row> rows;
  std::vector<std::pair<std::string, std::string>> skipped;  // abbreviation, reason

  for (const DatasetEntry& entry : entries) {
    const std::string path = dir + "/" + entry.abbreviation + ".csv";
    try {
      CsvSpec csv;
      csv.value_column = config.value_column;
      csv.date_column = config.date_column;
      const Series raw = load_csv(path, csv);

      Row row;
      row.entry = entry;
      const Series prepared = prepare(entry, raw, &row.warning);

      SubsampleConfig sub;
      if (config.block > 0) {
        sub.block = config.block;
      } else if (entry.expected_b > 0 && static_cast<std::size_t>(entry.expected_b) < prepared.size()) {
        sub.block = entry.expected_b;
      } else {
        sub.block = 0;  // fall back to the rule of thumb
        if (entry.expected_b > 0) {
          if (!row.warning.empty()) row.warning += "; ";
          row.warning += "registry block length " + std::to_string(entry.expected_b) +
                         " is not below n, using the rule of thumb";
        }
      }
      sub.workers = workers;
      row.report = subsample_test(prepared, sub);
      row.rejected = reject(row.report, config.alpha) && row.report.statistic > 0.0;

      if (config.with_ghm) {
        try {
          GhmOptions options;
          options.alpha = config.alpha;
          options.normality_rule = parse_normality_rule(config.normality_rule);
          options.workers = workers;
          options.strategy = 1;
          const GhmTrace trace = ghm_decide(prepared, options);
          row.ghm1 = verdict_name(verdict_for(trace, 1));
          row.ghm2 = verdict_name(verdict_for(trace, 2));
        } catch (const std::exception& e) {
          row.ghm1 = row.ghm2 = std::string("error: ") + e.what();
        }
      }
      if (!row.warning.empty()) {
        std::cerr << "warning: " << entry.abbreviation << ": " << row.warning << '\n';
      }
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      std::cerr << "skipping " << entry.abbreviation << ": " << e.what() << '\n';
      skipped.emplace_back(entry.abbreviation, e.what());
    }
  }
  if (rows.empty()) {
    throw DataError("no dataset could be loaded from " + dir);
  }

  if (config.format == OutputFormat::csv) {
    std::ostringstream out;
    out << "abbreviation,n,block,statistic,p_value,reject";
    if (config.with_ghm) out << ",ghm1,ghm2";
    out << '\n';
    for (const Row& row : rows) {
      out << row.entry.abbreviation << ',' << row.report.n << ',' << row.report.block << ','
          << fmt_double(row.report.statistic) << ',' << fmt_double(row.report.p_value) << ','
          << (row.rejected ? "true" : "false");
      if (config.with_ghm) out << ',' << row.ghm1 << ',' << row.ghm2;
      out << '\n';
    }
    write_output(config, out.str());
    return 0;
  }

  ordered_json j;
  j["schema"] = "icsts/climate/v1";
  j["meta"] = meta_block(config);
  j["data_dir"] = dir;
  j["alpha"] = config.alpha;
  ordered_json arr = ordered_json::array();
  for (const Row& row : rows) {
    ordered_json r;
    r["abbreviation"] = row.entry.abbreviation;
    r["description"] = row.entry.description;
    r["period"] = row.entry.period;
    r["detrended"] = row.entry.detrend;
    r["n"] = row.report.n;
    r["block"] = row.report.block;
    r["statistic"] = row.report.statistic;
    r["p_value"] = row.report.p_value;
    r["reject"] = row.rejected;
    if (config.with_ghm) {
      r["ghm1"] = row.ghm1;
      r["ghm2"] = row.ghm2;
    }
    if (!row.warning.empty()) r["warning"] = row.warning;
    arr.push_back(std::move(r));
  }
  j["rows"] = std::move(arr);
  if (!skipped.empty()) {
    ordered_json sk = ordered_json::array();
    for (const auto& [abbr, reason] : skipped) {
      sk.push_back(ordered_json{{"abbreviation", abbr}, {"reason", reason}});
    }
    j["skipped"] = std::move(sk);
  }
  write_output(config, j.dump(2));
  return 0;
}

int run_cli(const RunConfig& config) {
  try {
    if (config.command == "test") return cmd_test(config);
    if (config.command == "ghm") return cmd_ghm(config);
    if (config.command == "simulate") return cmd_simulate(config);
    if (config.command == "benchmark") return cmd_benchmark(config);
    if (config.command == "climate") return cmd_climate(config);
    throw UsageError("unknown command: '" + config.command + "'");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ics
