#include "ics/datasets.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ics/detrend.hpp"
#include "ics/errors.hpp"

namespace ics {

const std::vector<DatasetEntry>& registry() {
  static const std::vector<DatasetEntry> entries = {
      {"GLO", "global land and ocean temperature anomaly", "1881-2014",
       SamplingInterval::yearly, true, 100.0, 134, 32},
      {"GL", "global land temperature anomaly", "1881-2014",
       SamplingInterval::yearly, true, 100.0, 134, 32},
      {"GO", "global ocean temperature anomaly", "1881-2014",
       SamplingInterval::yearly, true, 100.0, 134, 32},
      {"SA", "solar activity", "1881-2014",
       SamplingInterval::yearly, true, 100.0, 134, 32},
      {"GHG", "greenhouse gas", "1881-2014",
       SamplingInterval::yearly, true, 100.0, 134, 32},
      {"N2O", "nitrous oxide", "1881-2014",
       SamplingInterval::yearly, true, 100.0, 134, 32},
      {"GCAG", "global component of climate at a glance", "1880-01..2016-12",
       SamplingInterval::monthly, true, 14400.0, 1644, 256},
      {"GISTEMP", "global surface temperature change", "1880-01..2016-12",
       SamplingInterval::monthly, true, 14400.0, 1644, 256},
      {"GMSL", "global mean sea level", "1880-01..2013-12",
       SamplingInterval::monthly, true, 14400.0, 1608, 256},
      {"SOI", "southern oscillation index", "1951-01..2021-12",
       SamplingInterval::monthly, false, 0.0, 852, 128},
      {"NAO", "north atlantic oscillation index", "1951-01..2021-12",
       SamplingInterval::monthly, false, 0.0, 852, 128},
      {"PDO", "pacific decadal oscillation index", "1854-01..2021-12",
       SamplingInterval::monthly, false, 0.0, 2016, 256},
      {"NH", "northern hemisphere sea ice area", "1979-01..2021-12",
       SamplingInterval::monthly, false, 0.0, 516, 128},
      {"SH", "southern hemisphere sea ice area", "1979-01..2021-12",
       SamplingInterval::monthly, false, 0.0, 516, 128},
  };
  return entries;
}

namespace {

SamplingInterval parse_interval(const std::string& name) {
  if (name == "yearly") return SamplingInterval::yearly;
  if (name == "monthly") return SamplingInterval::monthly;
  if (name == "none" || name.empty()) return SamplingInterval::none;
  throw DataError("unknown sampling interval '" + name + "' in manifest");
}

// Strict double parse of a trimmed cell; decimal point only.
bool parse_cell(std::string_view cell, double* out) {
  while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
    cell.remove_prefix(1);
  }
  while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' ||
                           cell.back() == '\r')) {
    cell.remove_suffix(1);
  }
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<DatasetEntry> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("manifest '" + path + "': " + e.what());
  }
  if (!doc.contains("datasets") || !doc["datasets"].is_array()) {
    throw DataError("manifest '" + path + "' lacks a 'datasets' array");
  }
  std::vector<DatasetEntry> entries;
  for (const auto& row : doc["datasets"]) {
    try {
      DatasetEntry e;
      e.abbreviation = row.at("abbreviation").get<std::string>();
      e.description = row.value("description", "");
      e.period = row.value("period", "");
      e.frequency = parse_interval(row.value("frequency", "none"));
      e.detrend = row.at("detrend").get<bool>();
      e.hp_lambda = row.value("hp_lambda", 0.0);
      e.expected_n = row.at("expected_n").get<std::size_t>();
      e.expected_b = row.at("expected_b").get<int>();
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("manifest '" + path + "': bad dataset entry: " + e.what());
    }
  }
  if (entries.empty()) throw DataError("manifest '" + path + "' lists no datasets");
  return entries;
}

Series load_csv(const std::string& path, const CsvSpec& spec) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "' is empty");
  if (line.size() >= 3 && line[0] == '\xEF' && line[1] == '\xBB' && line[2] == '\xBF') {
    line.erase(0, 3);  // UTF-8 BOM
  }
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw DataError("'" + path + "' has an empty header row");

  std::size_t value_col = header.size() - 1;
  if (!spec.value_column.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == spec.value_column) {
        value_col = i;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError("'" + path + "': no column named '" + spec.value_column + "'");
    }
  }
  if (!spec.date_column.empty()) {
    bool found = false;
    for (const auto& h : header) {
      if (trim(h) == spec.date_column) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError("'" + path + "': no column named '" + spec.date_column + "'");
    }
  }

  std::vector<double> values;
  std::size_t row_number = 0;  // 1-based data rows
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (value_col >= cells.size()) {
      throw DataError("'" + path + "': row " + std::to_string(row_number) +
                      " has no value cell");
    }
    double v = 0.0;
    if (!parse_cell(cells[value_col], &v)) {
      throw DataError("'" + path + "': row " + std::to_string(row_number) +
                      " has a non-numeric or missing value '" + trim(cells[value_col]) +
                      "' (decimal point only)");
    }
    values.push_back(v);
  }
  if (values.empty()) throw DataError("'" + path + "' contains no data rows");
  return Series(std::move(values), path);
}

Series prepare(const DatasetEntry& entry, const Series& raw, std::string* warning) {
  if (warning) {
    warning->clear();
    if (entry.expected_n != 0 && raw.size() != entry.expected_n) {
      *warning = entry.abbreviation + ": length " + std::to_string(raw.size()) +
                 " differs from the reference vintage's " +
                 std::to_string(entry.expected_n);
    }
  }
  if (!entry.detrend) return raw;
  HpResult hp = hp_filter(raw, HpConfig{entry.hp_lambda});
  return Series(std::vector<double>(hp.cycle.values().begin(), hp.cycle.values().end()),
                entry.abbreviation, raw.interval());
}

}  // namespace ics
