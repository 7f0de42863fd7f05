#pragma once

#include <cstdint>
#include <random>

namespace sedlab {

/// SplitMix64 finalizer; used to derive statistically independent seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for stream `index` derived from `base`. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// Seeded generator with platform-independent variates. The standard
/// distributions are implementation-defined, so uniform and normal draws are
/// built directly on the mt19937_64 bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (polar-free form, cached pair).
  double normal() noexcept;
  double normal(double mean, double sigma) noexcept { return mean + sigma * normal(); }
  std::uint64_t bits() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sedlab
