#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ics/processes.hpp"

namespace ics {

// Methods compared in the rejection-frequency study: the subsampling test
// and the model-based pipeline under each decision strategy.
enum class Method { ics, ghm1, ghm2 };

Method parse_method(const std::string& name);
std::string method_name(Method method);

struct BenchmarkSpec {
  std::vector<SimModel> models;
  std::vector<std::size_t> lengths;
  std::vector<Method> methods;
  int reps = 200;
  double alpha = 0.05;
  std::uint64_t seed = 1;
  std::size_t burn_in = 1000;
  int workers = 1;
};

struct BenchmarkCell {
  SimModel model = SimModel::pbar;
  std::size_t n = 0;
  Method method = Method::ics;
  int reps = 0;
  double alpha = 0.05;
  int rejections = 0;
  int errors = 0;      // replications whose pipeline failed (counted as non-rejections)
  double frequency = 0.0;
};

// Runs the full (model x n x method) grid.  Replication `rep` of `model`
// uses one RngStream per (model, rep) pair — not per n — so different
// lengths and methods see matched draws.  Results are independent of the
// worker count.
std::vector<BenchmarkCell> run_benchmark(const BenchmarkSpec& spec);

}  // namespace ics
