#include "ics/benchmark.hpp"

#include <algorithm>

#include "ics/errors.hpp"
#include "ics/ghm.hpp"
#include "ics/parallel.hpp"
#include "ics/reversibility.hpp"

namespace ics {

Method parse_method(const std::string& name) {
  if (name == "ics" || name == "ICS") return Method::ics;
  if (name == "ghm1" || name == "GHM1") return Method::ghm1;
  if (name == "ghm2" || name == "GHM2") return Method::ghm2;
  throw UsageError("unknown method '" + name + "' (ics, ghm1, ghm2)");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::ics: return "ics";
    case Method::ghm1: return "ghm1";
    case Method::ghm2: return "ghm2";
  }
  return "?";
}

namespace {

std::uint64_t replication_stream(std::size_t model_index, int rep) {
  return (static_cast<std::uint64_t>(model_index) << 32) |
         static_cast<std::uint64_t>(rep);
}

}  // namespace

std::vector<BenchmarkCell> run_benchmark(const BenchmarkSpec& spec) {
  if (spec.models.empty() || spec.lengths.empty() || spec.methods.empty()) {
    throw UsageError("benchmark needs at least one model, length, and method");
  }
  if (spec.reps < 1) throw UsageError("replication count must be >= 1");
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    throw UsageError("significance level must lie in (0, 1)");
  }

  const bool wants_ics =
      std::find(spec.methods.begin(), spec.methods.end(), Method::ics) != spec.methods.end();
  const bool wants_ghm1 =
      std::find(spec.methods.begin(), spec.methods.end(), Method::ghm1) != spec.methods.end();
  const bool wants_ghm2 =
      std::find(spec.methods.begin(), spec.methods.end(), Method::ghm2) != spec.methods.end();

  std::vector<BenchmarkCell> cells;
  for (std::size_t mi = 0; mi < spec.models.size(); ++mi) {
    const SimModel model = spec.models[mi];

    // The model's position in the full model list fixes its stream block, so
    // adding or removing other models does not reshuffle draws.
    const std::size_t model_index = static_cast<std::size_t>(model);

    for (std::size_t n : spec.lengths) {
      struct RepResult {
        bool ics_reject = false;
        bool ghm1_reject = false;
        bool ghm2_reject = false;
        bool ics_error = false;
        bool ghm_error = false;
      };
      std::vector<RepResult> results(static_cast<std::size_t>(spec.reps));

      parallel_for(results.size(), spec.workers, [&](std::size_t, std::size_t rep) {
        SimSpec sim;
        sim.model = model;
        sim.n = n;
        sim.burn_in = spec.burn_in;
        sim.seed = spec.seed;
        sim.stream = replication_stream(model_index, static_cast<int>(rep));
        const Series sample = simulate(sim);

        RepResult& out = results[rep];
        if (wants_ics) {
          try {
            SubsampleConfig config;
            config.workers = 1;  // replications already run in parallel
            const TestReport report = subsample_test(sample, config);
            out.ics_reject = reject(report, spec.alpha);
          } catch (const std::exception&) {
            out.ics_error = true;
          }
        }
        if (wants_ghm1 || wants_ghm2) {
          try {
            GhmOptions options;
            options.strategy = 1;  // the trace carries both strategies' outcomes
            options.alpha = spec.alpha;
            const GhmTrace trace = ghm_decide(sample, options);
            out.ghm1_reject = verdict_for(trace, 1) == Verdict::irreversible;
            out.ghm2_reject = verdict_for(trace, 2) == Verdict::irreversible;
          } catch (const std::exception&) {
            out.ghm_error = true;
          }
        }
      });

      for (Method method : spec.methods) {
        BenchmarkCell cell;
        cell.model = model;
        cell.n = n;
        cell.method = method;
        cell.reps = spec.reps;
        cell.alpha = spec.alpha;
        for (const RepResult& r : results) {
          const bool rejected = method == Method::ics    ? r.ics_reject
                                : method == Method::ghm1 ? r.ghm1_reject
                                                         : r.ghm2_reject;
          const bool errored = method == Method::ics ? r.ics_error : r.ghm_error;
          if (errored) {
            ++cell.errors;
          } else if (rejected) {
            ++cell.rejections;
          }
        }
        cell.frequency = static_cast<double>(cell.rejections) /
                         static_cast<double>(cell.reps);
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

}  // namespace ics
