#include "ma/raised.hpp"

namespace spc {

RaisedData raise(const WirtingerData& w) {
  RaisedData rd;
  rd.n = w.n;
  rd.r = w.r;
  rd.grad = w.grad;

  // symmetrize away the readout's last-bit asymmetry before inverting
  Eigen::MatrixXcd H = 0.5 * (w.hess + w.hess.adjoint());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
  double smin = svd.singularValues()(w.n - 1);
  double smax = svd.singularValues()(0);
  if (smin <= 0.0 || smax / smin > 1e14)
    throw CalcError("singular complex Hessian (condition number too large)");
  rd.cond = smax / smin;

  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(w.n, w.n);
  Eigen::MatrixXcd Hinv;
  Eigen::LLT<Eigen::MatrixXcd> llt(H);
  if (llt.info() == Eigen::Success) {
    Hinv = llt.solve(id);
  } else {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(H);
    if (!lu.isInvertible()) throw CalcError("singular complex Hessian");
    Hinv = lu.inverse();
  }
  rd.rinv = Hinv.transpose();

  rd.rup = rd.rinv * rd.grad.conjugate();
  cplx s = (rd.rup.array() * rd.grad.array()).sum();  // sum r^i r_i
  rd.grad_norm_sq = s.real();
  rd.denom = -rd.r + rd.grad_norm_sq;
  if (!(rd.denom > 0.0))
    throw CalcError("-r + |dr|^2_r <= 0: not a usable defining function here");

  rd.atilde = rd.rinv - (rd.rup * rd.rup.adjoint()) / rd.denom;
  return rd;
}

double tilde_laplacian(const RaisedData& rd, const HermitianForm& f_hessian) {
  return rd.atilde.cwiseProduct(f_hessian).sum().real();
}

cplx R_op(const RaisedData& rd, const Eigen::VectorXcd& f_gradient) {
  return (rd.rup.array() * f_gradient.array()).sum();
}

double tilde_grad_norm_sq(const RaisedData& rd,
                          const Eigen::VectorXcd& f_gradient) {
  cplx quad =
      (f_gradient.transpose() * rd.rinv * f_gradient.conjugate()).value();
  cplx rf = R_op(rd, f_gradient);
  return quad.real() - std::norm(rf) / rd.denom;
}

}  // namespace spc
