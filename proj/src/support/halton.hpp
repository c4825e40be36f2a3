#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace spc {

// Radical-inverse Halton value for 1-based sample index i.
inline double halton(std::uint64_t i, unsigned base) {
  double f = 1.0, x = 0.0;
  while (i > 0) {
    f /= base;
    x += f * double(i % base);
    i /= base;
  }
  return x;
}

// Low-discrepancy direction on the unit sphere of R^dim: Halton components
// pushed through Box-Muller, then normalized. Deterministic in (i, dim).
inline std::vector<double> halton_sphere(std::uint64_t i, std::size_t dim) {
  static const unsigned primes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                      23, 29, 31, 37, 41, 43, 47, 53};
  std::vector<double> v(dim);
  std::size_t pairs = (dim + 1) / 2;
  for (std::size_t p = 0; p < pairs; ++p) {
    double u1 = halton(i + 1, primes[2 * p]);
    double u2 = halton(i + 1, primes[2 * p + 1]);
    u1 = (u1 * 4503599627370495.0 + 1.0) / 4503599627370496.0;  // keep off 0
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586477 * u2;
    v[2 * p] = rad * std::cos(ang);
    if (2 * p + 1 < dim) v[2 * p + 1] = rad * std::sin(ang);
  }
  double norm = 0.0;
  for (double c : v) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : v) c /= norm;
  return v;
}

}  // namespace spc
