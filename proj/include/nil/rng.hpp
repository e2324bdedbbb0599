#pragma once

#include <cstdint>
#include <random>

namespace nil {

// Deterministic across platforms: mt19937_64 is standard-specified, and the
// uniform mapping below avoids the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double unit() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t bits() { return eng_(); }
  int index(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace nil
