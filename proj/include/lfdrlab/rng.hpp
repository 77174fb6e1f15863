#pragma once

#include <cstdint>
#include <random>

namespace lfdr {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for replication `index` under `master`:
///   mix64(master + 0x9E3779B97F4A7C15 * (index + 1))
/// Replications therefore draw from independent streams regardless of the
/// order in which they are executed.
std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// mt19937_64 stream with portable uniform and normal draws. Normals come
/// from the inverse-CDF transform of one uniform, so a given seed produces
/// the same variates on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform() noexcept;
  double normal() noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace lfdr
