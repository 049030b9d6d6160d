#pragma once
// Seeded uniform generator for the randomized oracles. Doubles are carved
// straight out of the mt19937_64 stream rather than going through
// std::uniform_real_distribution, so a seed pins the exact sequence on
// every platform.

#include <cstdint>
#include <random>

namespace dfnv {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace dfnv
