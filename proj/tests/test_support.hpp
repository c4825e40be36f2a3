#pragma once

#include <cstdint>
#include <vector>

#include "expr/ast.hpp"
#include "geometry/sample.hpp"
#include "support/rng.hpp"

namespace spc::testing {

// the five stock domains with default parameters
inline std::vector<DomainSpec> corpus() {
  return {builtin("ball", {}), builtin("ellipsoid", {}),
          builtin("example51", {}), builtin("example52", {}),
          builtin("disc_perturbed", {})};
}

// random interior points: shrink boundary samples toward the anchor point
inline std::vector<std::vector<double>> interior_points(const DomainSpec& dom,
                                                        int count,
                                                        std::uint64_t seed) {
  SampleResult sr = sample_boundary(dom, count, seed);
  std::vector<std::vector<double>> out;
  out.reserve(sr.samples.size());
  for (std::size_t i = 0; i < sr.samples.size(); ++i) {
    double u = Rng(seed, 1000 + i).uniform(0.1, 0.9);
    std::vector<double> z(dom.interior_point);
    for (std::size_t k = 0; k < z.size(); ++k)
      z[k] += u * (sr.samples[i].point[k] - z[k]);
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace spc::testing
