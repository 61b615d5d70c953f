#pragma once

#include <string>
#include <vector>

#include "ics/series.hpp"

namespace ics {

// Metadata for one climate series: how it is sampled, whether the test runs
// on the HP cycle or the raw data, and the sample/block sizes the pipeline
// expects for the reference vintage.
struct DatasetEntry {
  std::string abbreviation;
  std::string description;
  std::string period;
  SamplingInterval frequency = SamplingInterval::yearly;
  bool detrend = false;
  double hp_lambda = 0.0;  // 100 yearly / 14400 monthly when detrend is set
  std::size_t expected_n = 0;
  int expected_b = 0;
};

// The built-in registry of the 14 climate series.
const std::vector<DatasetEntry>& registry();

// Loads a registry from a JSON manifest (same fields as the built-in one;
// see data/registry.json for the shipped copy).
std::vector<DatasetEntry> load_manifest(const std::string& path);

// Column selection for CSV ingestion: empty value_column means "the last
// column"; the date column, when named, is only checked for presence.
struct CsvSpec {
  std::string value_column;
  std::string date_column;
};

// Parses a comma-separated UTF-8 file with a header row into a Series in
// file order.  Strict number grammar (decimal point only); any missing or
// non-numeric cell fails with the 1-based data row number.
Series load_csv(const std::string& path, const CsvSpec& spec = {});

// Applies the entry's preprocessing: HP cycle extraction when detrend is
// set, identity otherwise.  A length mismatch against expected_n is reported
// through `warning` (when non-null) rather than failing, since public data
// vintages drift.
Series prepare(const DatasetEntry& entry, const Series& raw, std::string* warning = nullptr);

}  // namespace ics
