#include "lfdrlab/rng.hpp"

#include "lfdrlab/normal.hpp"

namespace lfdr {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

double Rng::uniform() noexcept {
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::normal() noexcept { return std_normal_quantile(uniform()); }

}  // namespace lfdr
