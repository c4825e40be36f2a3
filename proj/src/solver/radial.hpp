#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spc {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Discrete radial profile f(t) on a grid in [0, 1-eps], t = |z|^2.
// fp/fpp are post-processed high-order derivative estimates; residual is the
// collocation residual of (f')^{n-1}(f' + t f'') = e^{(n+1) f} at every node
// (one-sided closures at both ends), and rho = -exp(-f).
struct RadialProfile {
  int n = 0;
  std::vector<double> t, f, fp, fpp, rho, residual;
};

// Collocation residual at one node, from the grid values alone: 3-point
// stencils for f' and f''; node 0 uses the t = 0 form (f')^n - e^{(n+1)f}
// with a one-sided f', node N uses left-sided stencils (closure diagnostic).
double radial_residual(const RadialProfile& p, int node);

// Fills fp/fpp (5-point 4th-order windows), rho, and the residual column.
RadialProfile make_profile(int n, std::vector<double> t, std::vector<double> f);

struct RadialSolve {
  RadialProfile profile;
  int iterations = 0;
  double scaled_residual = 0;  // max_k |R_k| e^{-(n+1) f_k}
  bool hit_tolerance = false;
};

// Damped Newton for the radial problem on the geometric mesh
// t_k = 1 - eps^(k/N), k = 0..N, with Dirichlet closure f(1-eps) = -log(eps).
// Starts from f = 0 with frozen-coefficient (Picard) steps until the iterate
// is safely monotone, then switches to true Newton steps. Stalling below the
// round-off floor 1e-8 is accepted; stalling above it throws SolverError.
RadialSolve solve_radial(int n, int intervals, double eps_grid, double tol);

// CSV columns: t, f, fp, rho, residual.
void write_radial_csv(const RadialProfile& p, std::ostream& os);

}  // namespace spc
