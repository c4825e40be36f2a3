#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ma/raised.hpp"

namespace spc {

// Square matrices of Taylor series, expanded by Laplace cofactors. Intended
// for the small bordered/Hessian matrices that show up here (n <= 8).
using TaylorMat = std::vector<std::vector<Taylor<cplx>>>;

Taylor<cplx> det_taylor(const TaylorMat& m);
// adjugate over determinant; pre: det nonzero at the base point
TaylorMat inverse_taylor(const TaylorMat& m);

// J(r) as the negated bordered determinant
//   -det [ r      dr_bar ]
//        [ dr     H(r)   ]
// where dr_bar is the row (r_1bar .. r_nbar) and dr the matching column.
double J_bordered(const WirtingerData& w);

// J(r) = det H(r) * (-r + |dr|^2_r), the boundary-stable product form
double J_product(const WirtingerData& w, const RaisedData& rd);

// jet of J to order (input order - 2), assembled from the bordered
// determinant of derivative jets; valid on and off the boundary
Taylor<cplx> J_jet(const Taylor<double>& rjet);

// r -> r + (a/2) r^2 at the jet level (same defining function, Hessian
// shifted toward positive definite)
Taylor<double> psh_shift(const Taylor<double>& rjet, double a);

// smallest a in {0, 1, 2, 4, 8, ...} whose shifted complex Hessian is
// positive definite at this point; throws past 2^20
double auto_shift(const Taylor<double>& rjet);

// relative residual of the shift invariance
//   J(r) = (1 + a r)^{-n} det H(r[a]) (-r + (1 + 2 a r) s)
// with s contracting the unshifted gradient against the shifted inverse
double shift_consistency(const Taylor<double>& rjet, double a);

// relative residual of det H(l) = J e^{(n+1) l} for l = -log(-r), with
// H(l) = H(r)/(-r) + (dr)*(dr)/r^2; interior points only
double log_level_identity_check(const WirtingerData& w, const RaisedData& rd);

struct LogJDerivs {
  Eigen::VectorXcd gradient;
  HermitianForm hessian;
};

// gradient of log J from the closed form
//   (log J)_k = a^{ij} r_{ij k} + r^i r_{ik} / (-r + |dr|^2_r)
// (exact, no J in sight); Hessian read from the jet of log J, so it stays
// valid at boundary points where the naive quotient forms degenerate.
// Throws when J <= 0 at the point.
LogJDerivs logJ_derivatives(const WirtingerData& w, const RaisedData& rd,
                            const Taylor<double>& rjet);

// B0 = tilde-Laplacian of log J over 2n(n+1); B = (-r) B0. The product form
// is the primary definition because the trace form degenerates at the
// boundary. Returns {B, B0}.
std::pair<double, double> B_and_B0(const RaisedData& rd,
                                   const LogJDerivs& d);

// interior-only trace form tr(H(l)^{-1} H(log J)) / (2n(n+1)); agrees with
// (-r) B0 and is kept as a cross-check
double B_trace_form(const WirtingerData& w, const RaisedData& rd,
                    const HermitianForm& logJ_hessian);

// everything the downstream criteria need at one point
struct FeffermanPointData {
  int n = 0;
  double r = 0.0;
  double J = 0.0;     // product form
  double detH = 0.0;  // det H(r)
  double ell = 0.0;   // -log(-r); NaN outside the domain
  double B0 = 0.0;
  double B = 0.0;
  double rho1 = 0.0;  // r * J^{-1/(n+1)} * exp(-B)
  Eigen::VectorXcd logJ_gradient;
  HermitianForm logJ_hessian;
};

// pre: jet order >= 4
FeffermanPointData fefferman_point(const Taylor<double>& rjet);

// z -> A z + b with A invertible; the only biholomorphisms handled here
struct AffineMap {
  Eigen::MatrixXcd A;
  Eigen::VectorXcd b;
};

// throws unless A is square, matches b, and has nonzero determinant
void check_biholomorphic(const AffineMap& m);

// image of a real coordinate vector (x block then y block)
std::vector<double> apply_affine(const AffineMap& m,
                                 const std::vector<double>& xy);

// pullback rho_pre(z) = rho_post(A z + b) * |det A|^{-2/(n+1)}
double transport_factor(const AffineMap& m);

// det H(rho_pre) = |det A|^{2/(n+1)} * det H(rho_post) o phi
double det_hessian_factor(const AffineMap& m);

}  // namespace spc
