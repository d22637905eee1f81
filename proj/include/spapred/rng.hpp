#pragma once

#include <cstdint>
#include <random>

namespace spapred {

/// One SplitMix64 mixing step. Used to derive independent sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seedable 64-bit Mersenne Twister with portable draws.
///
/// The engine output sequence of std::mt19937_64 is fixed by the standard,
/// but the standard distributions are not, so every draw is derived from raw
/// engine words here. Sub-streams (one per atom, per restart, per epoch) are
/// obtained with stream(seed, id), which seeds a fresh engine with
/// splitmix64(splitmix64(seed) ^ id).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace spapred
