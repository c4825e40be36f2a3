#include "ma/fefferman.hpp"

#include <cmath>
#include <string>

namespace spc {

namespace {

TaylorMat minor_of(const TaylorMat& m, int row, int col) {
  int n = int(m.size());
  TaylorMat out(n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    out[oi].reserve(n - 1);
    for (int j = 0; j < n; ++j)
      if (j != col) out[oi].push_back(m[i][j]);
    ++oi;
  }
  return out;
}

}  // namespace

Taylor<cplx> det_taylor(const TaylorMat& m) {
  int n = int(m.size());
  if (n == 1) return m[0][0];
  Taylor<cplx> acc(m[0][0].space());
  for (int j = 0; j < n; ++j) {
    Taylor<cplx> term = m[0][j] * det_taylor(minor_of(m, 0, j));
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

TaylorMat inverse_taylor(const TaylorMat& m) {
  int n = int(m.size());
  Taylor<cplx> det = det_taylor(m);
  if (std::abs(det.value()) == 0.0)
    throw CalcError("singular Taylor matrix: determinant vanishes at the base point");
  Taylor<cplx> idet = det.reciprocal();
  TaylorMat out(n, std::vector<Taylor<cplx>>(n, Taylor<cplx>(m[0][0].space())));
  if (n == 1) {
    out[0][0] = idet;
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Taylor<cplx> cof = det_taylor(minor_of(m, j, i));
      if ((i + j) % 2 == 1) cof = -cof;
      out[i][j] = cof * idet;
    }
  return out;
}

double J_bordered(const WirtingerData& w) {
  int n = w.n;
  Eigen::MatrixXcd m(n + 1, n + 1);
  m(0, 0) = w.r;
  for (int j = 0; j < n; ++j) {
    m(0, 1 + j) = std::conj(w.grad(j));  // r_jbar
    m(1 + j, 0) = w.grad(j);
  }
  m.block(1, 1, n, n) = w.hess;
  return -m.determinant().real();
}

double J_product(const WirtingerData& w, const RaisedData& rd) {
  return w.hess.determinant().real() * rd.denom;
}

Taylor<cplx> J_jet(const Taylor<double>& rjet) {
  int order = rjet.space().order();
  if (order < 2) throw CalcError("J_jet needs a jet of order >= 2");
  int n = rjet.space().dim() / 2;
  int m = order - 2;
  Taylor<cplx> rc = rjet.cast<cplx>();
  TaylorMat bm(n + 1, std::vector<Taylor<cplx>>(n + 1));
  bm[0][0] = rc.to_order(m);
  for (int j = 0; j < n; ++j) {
    bm[0][1 + j] = wirt_jet(rc, {}, {j}).to_order(m);
    bm[1 + j][0] = wirt_jet(rc, {j}, {}).to_order(m);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bm[1 + i][1 + j] = wirt_jet(rc, {i}, {j});
  return -det_taylor(bm);
}

Taylor<double> psh_shift(const Taylor<double>& rjet, double a) {
  return rjet + rjet * rjet * (a / 2.0);
}

double auto_shift(const Taylor<double>& rjet) {
  double a = 0.0;
  while (true) {
    WirtingerData w = wirtinger(psh_shift(rjet, a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w.hess);
    if (es.eigenvalues().minCoeff() > 0.0) return a;
    if (a >= double(1 << 20))
      throw CalcError(
          "no plurisubharmonic shift up to a = 2^20: complex Hessian stays "
          "indefinite at this point");
    a = (a == 0.0) ? 1.0 : 2.0 * a;
  }
}

double shift_consistency(const Taylor<double>& rjet, double a) {
  WirtingerData w = wirtinger(rjet);
  // bordered reference: stays defined even where H(r) is indefinite
  double jref = J_bordered(w);

  WirtingerData ws = wirtinger(psh_shift(rjet, a));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(ws.hess);
  if (!lu.isInvertible())
    throw CalcError("shifted complex Hessian is singular");
  Eigen::MatrixXcd rinv_s = lu.inverse().transpose();
  cplx s = 0.0;
  for (int i = 0; i < w.n; ++i)
    for (int j = 0; j < w.n; ++j)
      s += rinv_s(i, j) * w.grad(i) * std::conj(w.grad(j));
  double r = w.r;
  double jshift = std::pow(1.0 + a * r, -w.n) * ws.hess.determinant().real() *
                  (-r + (1.0 + 2.0 * a * r) * s.real());
  return std::abs(jshift - jref) / std::max(std::abs(jref), 1e-300);
}

namespace {

Eigen::MatrixXcd level_hessian(const WirtingerData& w) {
  double r = w.r;
  return w.hess / (-r) +
         (w.grad * w.grad.adjoint()) / (r * r);
}

}  // namespace

double log_level_identity_check(const WirtingerData& w, const RaisedData& rd) {
  if (!(w.r < 0.0))
    throw CalcError("level identity needs an interior point (r < 0)");
  double lhs = level_hessian(w).determinant().real();
  double rhs = J_product(w, rd) * std::pow(-w.r, -(w.n + 1));
  return std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
}

LogJDerivs logJ_derivatives(const WirtingerData& w, const RaisedData& rd,
                            const Taylor<double>& rjet) {
  if (rjet.space().order() < 4)
    throw CalcError("logJ_derivatives needs a jet of order >= 4");
  int n = w.n;
  LogJDerivs out;
  out.gradient.resize(n);
  for (int k = 0; k < n; ++k) {
    cplx lap_rk = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lap_rk += rd.atilde(i, j) * w.third(i, j, k);
    cplx uk = 0.0;
    for (int i = 0; i < n; ++i) uk += rd.rup(i) * w.hess_hol(i, k);
    out.gradient(k) = lap_rk + uk / rd.denom;
  }

  Taylor<cplx> jt = J_jet(rjet);
  if (!(jt.value().real() > 0.0))
    throw CalcError("J <= 0 at this point (J = " +
                    std::to_string(jt.value().real()) +
                    "); log J is undefined here");
  Taylor<cplx> lj = log(jt);
  out.hessian.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) out.hessian(k, l) = wirt_value(lj, {k}, {l});
  out.hessian = ((out.hessian + out.hessian.adjoint()) / 2.0).eval();
  return out;
}

std::pair<double, double> B_and_B0(const RaisedData& rd, const LogJDerivs& d) {
  int n = rd.n;
  double b0 = tilde_laplacian(rd, d.hessian) / (2.0 * n * (n + 1));
  return {(-rd.r) * b0, b0};
}

double B_trace_form(const WirtingerData& w, const RaisedData& rd,
                    const HermitianForm& logJ_hessian) {
  if (!(w.r < 0.0))
    throw CalcError("trace form of B needs an interior point (r < 0)");
  (void)rd;
  Eigen::MatrixXcd hl = level_hessian(w);
  return hl.fullPivLu().solve(logJ_hessian).trace().real() /
         (2.0 * w.n * (w.n + 1));
}

FeffermanPointData fefferman_point(const Taylor<double>& rjet) {
  if (rjet.space().order() < 4)
    throw CalcError("fefferman_point needs a jet of order >= 4");
  WirtingerData w = wirtinger(rjet);
  RaisedData rd = raise(w);
  FeffermanPointData out;
  out.n = w.n;
  out.r = w.r;
  out.detH = w.hess.determinant().real();
  out.J = J_product(w, rd);
  out.ell = w.r < 0.0 ? -std::log(-w.r) : std::nan("");
  LogJDerivs d = logJ_derivatives(w, rd, rjet);
  out.logJ_gradient = d.gradient;
  out.logJ_hessian = d.hessian;
  auto [b, b0] = B_and_B0(rd, d);
  out.B = b;
  out.B0 = b0;
  out.rho1 = w.r * std::pow(out.J, -1.0 / (w.n + 1)) * std::exp(-out.B);
  return out;
}

void check_biholomorphic(const AffineMap& m) {
  if (m.A.rows() != m.A.cols())
    throw CalcError("affine map matrix must be square");
  if (m.b.size() != m.A.rows())
    throw CalcError("affine map offset size does not match the matrix");
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m.A);
  if (!lu.isInvertible())
    throw CalcError("affine map is not biholomorphic: det A = 0");
}

std::vector<double> apply_affine(const AffineMap& m,
                                 const std::vector<double>& xy) {
  int n = int(m.A.rows());
  if (int(xy.size()) != 2 * n)
    throw CalcError("coordinate vector size does not match the affine map");
  Eigen::VectorXcd z(n);
  for (int j = 0; j < n; ++j) z(j) = cplx(xy[j], xy[n + j]);
  Eigen::VectorXcd wz = m.A * z + m.b;
  std::vector<double> out(2 * n);
  for (int j = 0; j < n; ++j) {
    out[j] = wz(j).real();
    out[n + j] = wz(j).imag();
  }
  return out;
}

double transport_factor(const AffineMap& m) {
  check_biholomorphic(m);
  int n = int(m.A.rows());
  return std::pow(std::abs(m.A.determinant()), -2.0 / (n + 1));
}

double det_hessian_factor(const AffineMap& m) {
  check_biholomorphic(m);
  int n = int(m.A.rows());
  return std::pow(std::abs(m.A.determinant()), 2.0 / (n + 1));
}

}  // namespace spc
