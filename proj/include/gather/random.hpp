#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gather {

/// Seeded stream of uniform reals and integer choices. The conversions are
/// written out so that a seed replays identically with any standard library.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) : engine_(seed) {}

  /// Independent substream derived from a root seed and a stream name.
  static RandomSource substream(std::uint64_t root, std::string_view name,
                                std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used for seed derivation and hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace gather
