#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "expr/ast.hpp"

namespace spc {

struct SpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kahler metric of the potential u = -log(-r) at an interior point.
struct MetricData {
  int n = 0;
  std::vector<double> point;
  Eigen::MatrixXcd g;     // g_{i jbar} = d^2 u / dz_i dzbar_j
  Eigen::MatrixXcd ginv;  // inverse; ginv(j, i) contracts as g^{i jbar}
  double det_g = 0.0;
};

// pre: r(p) < 0 and the metric is positive definite there
MetricData metric_at(const DomainSpec& dom, const std::vector<double>& p);

// Ricci tensor R_{k lbar} = -d^2 log det g / dz_k dzbar_l, differentiated at
// the jet level through the metric determinant (needs order-4 data of r)
Eigen::MatrixXcd ricci_at(const DomainSpec& dom, const std::vector<double>& p);

// Frobenius ratio |R + (n+1) g| / |g|; zero iff Kahler-Einstein with
// constant -(n+1)
double einstein_deficit(const DomainSpec& dom, const std::vector<double>& p);

// smallest eigenvalue of R + (n+1) g; how far the metric sits above the
// Einstein lower bound (negative = bound violated in some direction)
double super_einstein_min_eig(const DomainSpec& dom,
                              const std::vector<double>& p);

// -4 g^{i jbar} d^2 f / dz_i dzbar_j at p (positive-semidefinite convention)
double laplacian(const DomainSpec& dom, const ExprPtr& f,
                 const std::vector<double>& p);

struct RayleighPoint {
  double s = 0.0;
  double quotient = 0.0;
  double errbar = 0.0;  // quadrature error estimate, not a statistical bound
};

// Rayleigh quotients of the mollified radial family (1-|z|^2)^s chi on the
// unit ball of C^n, one row per grid exponent. The integrals reduce to one
// radial dimension; panels are refined adaptively to ~1e-9.
std::vector<RayleighPoint> rayleigh_scan(int n,
                                         const std::vector<double>& s_grid,
                                         double eps_c, int panel_points = 32);

// s = 1.05, 1.10, ..., 3.00
std::vector<double> default_s_grid();

struct McEstimate {
  double quotient = 0.0;
  double se = 0.0;  // delta-method standard error of the ratio
  std::int64_t samples = 0;
};

// Monte Carlo estimate of the same quotient: uniform draws in the ball,
// full-metric integrands (no radial reduction). Deterministic for any
// thread count: one counter-seeded stream per sample, fixed-order sums.
McEstimate rayleigh_mc(int n, double s, double eps_c, std::int64_t samples,
                       std::uint64_t seed, int threads = 1);

void write_spectrum_csv(const std::vector<RayleighPoint>& rows,
                        std::ostream& os);

}  // namespace spc
