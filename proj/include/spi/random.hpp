#pragma once

#include <cstdint>
#include <random>

namespace spi {

/// Seedable generator with a fully specified output stream.
///
/// Raw bits come from std::mt19937_64, whose sequence is fixed by the C++
/// standard. The mapping to doubles is done here rather than through the
/// <random> distributions, which are implementation-defined:
///   uniform01  top 53 bits scaled by 2^-53, range [0, 1)
///   bit        most significant bit of one draw
///   normal     Box-Muller cosine branch on two uniform draws, one normal per call
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  bool bit() { return (next() >> 63) != 0; }
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Order-sensitive combination of a base seed with a stream of indices.
template <typename... Ts>
std::uint64_t derive_seed(std::uint64_t base, Ts... parts) {
  std::uint64_t h = mix64(base);
  ((h = mix64(h ^ (static_cast<std::uint64_t>(parts) + 0x9e3779b97f4a7c15ULL))), ...);
  return h;
}

}  // namespace spi
