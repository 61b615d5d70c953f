#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ics {

enum class OutputFormat { json, csv };

// Parsed command line for every subcommand; unused fields keep their
// defaults.  See tools/main.cpp for the flag surface.
struct RunConfig {
  std::string command;  // test | ghm | simulate | benchmark | climate

  std::string input_path;
  double alpha = 0.05;
  int block = 0;           // 0 = rule of thumb
  int grid_lambdas = 17;
  int grid_taus = 31;
  int reps = 200;
  std::uint64_t seed = 1;
  int workers = 0;         // 0 = hardware concurrency
  OutputFormat format = OutputFormat::json;
  std::string output_path;  // empty = stdout

  std::string value_column;  // CSV ingestion
  std::string date_column;

  std::string sim_model = "pbar";  // simulate
  std::size_t sim_n = 200;
  std::size_t burn_in = 1000;

  std::vector<std::string> models;   // benchmark
  std::vector<std::size_t> lengths;
  std::vector<std::string> methods;

  int ghm_strategy = 1;              // ghm / climate
  std::string normality_rule = "both";

  std::string data_dir;       // climate (falls back to ICS_DATA_DIR)
  std::string manifest_path;  // optional registry override
  bool with_ghm = false;      // climate: add GHM verdict columns
};

// Each command returns a process exit code (0 on success) and writes its
// report to config.output_path or stdout.
int cmd_test(const RunConfig& config);
int cmd_ghm(const RunConfig& config);
int cmd_simulate(const RunConfig& config);
int cmd_benchmark(const RunConfig& config);
int cmd_climate(const RunConfig& config);

// Dispatches on config.command and maps errors to exit codes:
// 0 success, 1 usage error, 2 data error, 3 numerical failure.
int run_cli(const RunConfig& config);

}  // namespace ics
