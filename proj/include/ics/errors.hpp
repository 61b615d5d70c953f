#pragma once

#include <stdexcept>

namespace ics {

// Error categories aligned with the CLI exit codes (see tools/main.cpp):
// UsageError -> 1, DataError -> 2, NumericalError -> 3.

// Invalid arguments or options: bad counts, out-of-range parameters.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Problems with input data: non-finite values, malformed CSV, series too
// short for the requested operation.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: singular designs, non-convergent optimizations,
// degenerate (zero-variance) samples.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ics
