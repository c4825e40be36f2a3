#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "expr/ast.hpp"
#include "jets/wirtinger.hpp"

namespace spc {

struct GeomError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundarySample {
  std::vector<double> point;           // in R^{2n}
  double residual = 0.0;               // |r(point)|
  std::vector<double> inward_normal;   // unit, real 2n-vector
  std::vector<Eigen::VectorXcd> frame; // n-1 orthonormal vectors spanning H_z
};

struct SampleResult {
  std::vector<BoundarySample> samples;
  int requested = 0;
  int skipped = 0;  // rays that left the sampling box without a sign change
};

// First boundary crossing along interior_point + t * dir, t > 0: coarse march
// to a sign change, bisection to |r| < 1e-12, then two Newton polish steps on
// the real gradient. Returns nothing if the ray leaves the sampling box.
std::optional<BoundarySample> cross_ray(const DomainSpec& domain,
                                        const std::vector<double>& dir);

// Deterministic boundary sampling: the 4n axis directions first, then a
// seed-rotated Halton sphere sequence. Output is identical for any `threads`.
SampleResult sample_boundary(const DomainSpec& domain, int count,
                             std::uint64_t seed, int threads = 1);

// Orthonormal basis of H_z = {v : sum_j r_j v_j = 0}; throws on vanishing
// gradient.
std::vector<Eigen::VectorXcd> tangent_frame(const WirtingerData& w);

}  // namespace spc
