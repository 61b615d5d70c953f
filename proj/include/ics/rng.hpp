#pragma once

#include <cstdint>
#include <random>

namespace ics {

// Deterministic random stream addressed by (seed, stream).  Distinct stream
// ids give independent sequences for the same seed, which lets replications
// share one user-facing seed while staying reproducible under any degree of
// parallelism.  The (seed, stream) pair is hashed through a splitmix64-style
// finalizer into the mt19937_64 seed so that neighbouring ids decorrelate.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), engine_(mix(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform draw on the open interval (0, 1): never exactly 0 or 1, so it is
  // safe to feed through quantile functions and the simulators below.
  double uniform() {
    const std::uint64_t x = engine_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix(splitmix(seed) ^ splitmix(stream * 0xda942042e4dd58b5ULL + 1));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace ics
