#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "jets/wirtinger.hpp"

namespace spc {

struct CalcError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using HermitianForm = Eigen::MatrixXcd;  // H = H^*, eigenvalues real

// Raised-index data of a defining function at one point. rinv(i,j) = r^{ij}
// with the transpose convention [r^{ij}]^t = H^{-1}, locked by the
// delta-contraction invariant sum_j rinv(i,j) H(k,j) = delta_ik.
struct RaisedData {
  int n = 0;
  double r = 0.0;
  Eigen::VectorXcd grad;    // r_i
  Eigen::MatrixXcd rinv;    // r^{ij}
  Eigen::VectorXcd rup;     // r^i = sum_j r^{ij} conj(r_j)
  double grad_norm_sq = 0;  // |dr|^2_r = sum r^{ij} r_i conj(r_j)
  double denom = 0;         // -r + |dr|^2_r, must be > 0
  Eigen::MatrixXcd atilde;  // a^{ij} = r^{ij} - r^i conj(r^j) / denom
  double cond = 0;          // condition number of H
};

// pre: H invertible and -r + |dr|^2_r > 0; Cholesky when positive definite,
// full-pivot LU otherwise
RaisedData raise(const WirtingerData& w);

// sum_ij a^{ij} f_{ij}; real for Hermitian f_hessian
double tilde_laplacian(const RaisedData& rd, const HermitianForm& f_hessian);

// sum_j r^j df/dz_j
cplx R_op(const RaisedData& rd, const Eigen::VectorXcd& f_gradient);

// sum r^{ij} f_i conj(f_j) - |Rf|^2 / denom, for real-valued f
double tilde_grad_norm_sq(const RaisedData& rd,
                          const Eigen::VectorXcd& f_gradient);

}  // namespace spc
