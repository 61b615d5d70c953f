#include <charconv>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ics/cli_commands.hpp"
#include "ics/errors.hpp"

namespace {

// Accepts "LxT" (e.g. "17x31") and writes the two grid sizes.
void parse_grid_spec(const std::string& text, ics::RunConfig& config) {
  const std::size_t sep = text.find('x');
  if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size()) {
    throw ics::UsageError("--grid must look like LxT, e.g. 17x31");
  }
  const auto parse_part = [&text](std::size_t first, std::size_t last) {
    int value = 0;
    const char* begin = text.data() + first;
    const char* end = text.data() + last;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end || value <= 0) {
      throw ics::UsageError("--grid must look like LxT with positive counts, got '" + text + "'");
    }
    return value;
  };
  config.grid_lambdas = parse_part(0, sep);
  config.grid_taus = parse_part(sep + 1, text.size());
}

ics::OutputFormat parse_format(const std::string& name) {
  if (name == "json") return ics::OutputFormat::json;
  if (name == "csv") return ics::OutputFormat::csv;
  throw ics::UsageError("--format must be json or csv");
}

}  // namespace

int main(int argc, char** argv) {
  ics::RunConfig config;
  std::string grid_spec = "17x31";
  std::string format_name;  // empty = per-command default

  CLI::App app{"Integrated copula-spectrum tests of pairwise time-reversibility"};
  app.require_subcommand(1);

  const auto add_input = [&config](CLI::App* cmd) {
    cmd->add_option("--input", config.input_path, "CSV file with a header row")->required();
    cmd->add_option("--value-column", config.value_column,
                    "name of the value column (default: last column)");
    cmd->add_option("--date-column", config.date_column,
                    "name of a date column that must be present");
  };
  const auto add_common = [&config, &format_name](CLI::App* cmd) {
    cmd->add_option("--workers", config.workers, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--format", format_name, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", config.output_path, "output file (default: stdout)");
  };
  const auto add_alpha = [&config](CLI::App* cmd) {
    cmd->add_option("--alpha", config.alpha, "significance level (default 0.05)");
  };

  CLI::App* test = app.add_subcommand("test", "Subsampling time-reversibility test on one series");
  add_input(test);
  add_alpha(test);
  test->add_option("--block", config.block, "block length b (default: rule of thumb)")
      ->check(CLI::NonNegativeNumber);
  test->add_option("--grid", grid_spec, "evaluation grid as LxT (default 17x31)");
  add_common(test);

  CLI::App* ghm = app.add_subcommand("ghm", "Model-based five-step reversibility screen");
  add_input(ghm);
  add_alpha(ghm);
  ghm->add_option("--strategy", config.ghm_strategy, "decision strategy: 1 = BIC, 2 = LRT")
      ->check(CLI::IsMember({1, 2}));
  ghm->add_option("--normality-rule", config.normality_rule,
                  "Step-2 rule: 'both' tests must pass, or 'either'")
      ->check(CLI::IsMember({"both", "either"}));
  add_common(ghm);

  CLI::App* simulate = app.add_subcommand("simulate", "Draw one benchmark-process sample path");
  simulate->add_option("--model", config.sim_model, "pbar, nbar or qar1")->required();
  simulate->add_option("--n", config.sim_n, "sample length")->check(CLI::PositiveNumber);
  simulate->add_option("--burn-in", config.burn_in, "discarded transitions (default 1000)");
  simulate->add_option("--seed", config.seed, "RNG seed");
  add_common(simulate);

  CLI::App* benchmark = app.add_subcommand("benchmark", "Rejection-frequency study over simulated models");
  benchmark->add_option("--models", config.models, "comma-separated: pbar,nbar,qar1")
      ->required()
      ->delimiter(',');
  benchmark->add_option("--lengths", config.lengths, "comma-separated sample sizes")
      ->required()
      ->delimiter(',');
  config.methods = {"ics"};
  benchmark->add_option("--methods", config.methods, "comma-separated: ics,ghm1,ghm2 (default ics)")
      ->delimiter(',');
  benchmark->add_option("--reps", config.reps, "replications per cell (default 200)")
      ->check(CLI::PositiveNumber);
  add_alpha(benchmark);
  benchmark->add_option("--seed", config.seed, "RNG seed");
  benchmark->add_option("--burn-in", config.burn_in, "discarded transitions per draw");
  add_common(benchmark);

  CLI::App* climate = app.add_subcommand("climate", "Run the test over the climate dataset registry");
  climate->add_option("--data-dir", config.data_dir,
                      "directory with <ABBREVIATION>.csv files (default: $ICS_DATA_DIR)");
  climate->add_option("--manifest", config.manifest_path, "registry manifest (default: built-in)");
  add_alpha(climate);
  climate->add_option("--block", config.block, "override every block length")
      ->check(CLI::NonNegativeNumber);
  climate->add_flag("--ghm", config.with_ghm, "add model-based verdict columns");
  climate->add_option("--normality-rule", config.normality_rule,
                      "Step-2 rule for --ghm: 'both' or 'either'")
      ->check(CLI::IsMember({"both", "either"}));
  climate->add_option("--value-column", config.value_column,
                      "value column name used for every file (default: last column)");
  climate->add_option("--date-column", config.date_column, "date column that must be present");
  add_common(climate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help / --version exit cleanly
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // every command-line mistake is a usage error
  }

  try {
    config.command = app.get_subcommands().front()->get_name();
    parse_grid_spec(grid_spec, config);
    if (format_name.empty()) {
      // Reports with one natural tabular shape default to CSV.
      const bool tabular = config.command == "simulate" || config.command == "benchmark" ||
                           config.command == "climate";
      config.format = tabular ? ics::OutputFormat::csv : ics::OutputFormat::json;
    } else {
      config.format = parse_format(format_name);
      if (config.format == ics::OutputFormat::csv &&
          (config.command == "test" || config.command == "ghm")) {
        throw ics::UsageError("the '" + config.command + "' report is JSON only");
      }
    }
  } catch (const ics::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  return ics::run_cli(config);
}
