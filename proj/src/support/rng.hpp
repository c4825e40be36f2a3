#pragma once

#include <cmath>
#include <cstdint>

namespace spc {

// Counter-seeded splitmix64 stream. Construction from (seed, index) gives an
// independent stream per work item, so results never depend on evaluation
// order or thread count.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index) noexcept
      : state_(seed ^ (0x9e3779b97f4a7c15ull * (index + 1))) {
    next();
    next();
  }

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1), 53-bit resolution
  double uniform() noexcept { return double(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) noexcept { return a + (b - a) * uniform(); }

  int uniform_int(int lo, int hi) noexcept {  // inclusive bounds
    return lo + int(next() % std::uint64_t(hi - lo + 1));
  }

  double normal() noexcept {
    // Box-Muller; u1 kept away from 0
    double u1 = double((next() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace spc
