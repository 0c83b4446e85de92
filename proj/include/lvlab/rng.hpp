#pragma once

#include <cstdint>
#include <random>

namespace lvlab {

// Deterministic uniform stream. The double construction is pinned to the raw
// 64-bit output (top 53 bits) so sequences are bit-identical across platforms,
// independent of any library distribution implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t raw() { return eng_(); }

private:
  std::mt19937_64 eng_;
};

} // namespace lvlab
