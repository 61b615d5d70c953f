#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ics/errors.hpp"

namespace ics {

// Sampling cadence of an observed series; `none` for simulated or untagged data.
enum class SamplingInterval { none, yearly, monthly };

// An ordered, finite, real-valued sample.  Construction validates the two
// invariants everything downstream relies on: at least two observations and
// no NaN/Inf entries.
class Series {
 public:
  explicit Series(std::vector<double> values, std::string label = "",
                  SamplingInterval interval = SamplingInterval::none)
      : values_(std::move(values)),
        label_(std::move(label)),
        interval_(interval) {
    if (values_.size() < 2) {
      throw DataError("series '" + label_ + "' needs at least 2 observations, got " +
                      std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw DataError("series '" + label_ + "' has a non-finite value at index " +
                        std::to_string(i));
      }
    }
  }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const { return values_; }
  const std::string& label() const { return label_; }
  SamplingInterval interval() const { return interval_; }

  // Same observations in reversed time order.
  Series reversed() const {
    std::vector<double> rev(values_.rbegin(), values_.rend());
    return Series(std::move(rev), label_, interval_);
  }

 private:
  std::vector<double> values_;
  std::string label_;
  SamplingInterval interval_;
};

}  // namespace ics
