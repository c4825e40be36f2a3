#include "approx/defect.hpp"

#include <cmath>

#include "jets/jet_eval.hpp"

namespace spc {

double J_of_rho(const Taylor<double>& rjet, bool with_B) {
  int order = rjet.space().order();
  if (order < 6) throw CalcError("J_of_rho needs a jet of order >= 6");
  int n = rjet.space().dim() / 2;
  int m2 = order - 4;  // order left for rho after J and B burn two each
  Taylor<cplx> rc = rjet.cast<cplx>();
  Taylor<cplx> r2 = rc.to_order(m2);

  Taylor<cplx> jt = J_jet(rjet);
  if (!(jt.value().real() > 0.0))
    throw CalcError("J <= 0 along the scan; rho is undefined here");

  Taylor<cplx> rho = r2 * pow_real(jt.to_order(m2), -1.0 / (n + 1));
  if (with_B) {
    Taylor<cplx> lj = log(jt);

    std::vector<Taylor<cplx>> gradj(n);
    for (int i = 0; i < n; ++i) gradj[i] = wirt_jet(rc, {i}, {}).to_order(m2);
    TaylorMat hj(n, std::vector<Taylor<cplx>>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        hj[i][j] = wirt_jet(rc, {i}, {j}).to_order(m2);
    TaylorMat hinv = inverse_taylor(hj);

    // rinv(i,j) = hinv(j,i); rup(i) = sum_j rinv(i,j) conj(r_j)
    std::vector<Taylor<cplx>> rupj(n, Taylor<cplx>(r2.space()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rupj[i] = rupj[i] + hinv[j][i] * gradj[j].conjugate();
    Taylor<cplx> s(r2.space());
    for (int i = 0; i < n; ++i) s = s + rupj[i] * gradj[i];
    Taylor<cplx> idenom = (s - r2).reciprocal();

    Taylor<cplx> lap(r2.space());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Taylor<cplx> atil =
            hinv[j][i] - rupj[i] * rupj[j].conjugate() * idenom;
        lap = lap + atil * wirt_jet(lj, {i}, {j}).to_order(m2);
      }
    // B = (-r) * lap / (2n(n+1))
    Taylor<cplx> b = lap * r2 * cplx(-1.0 / (2.0 * n * (n + 1)));
    rho = rho * exp(-b);
  }

  Eigen::MatrixXcd m(n + 1, n + 1);
  m(0, 0) = rho.value();
  for (int j = 0; j < n; ++j) {
    m(0, 1 + j) = wirt_value(rho, {}, {j});
    m(1 + j, 0) = wirt_value(rho, {j}, {});
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(1 + i, 1 + j) = wirt_value(rho, {i}, {j});
  return -m.determinant().real();
}

DefectScan defect_scan(const DomainSpec& domain, const BoundarySample& bs,
                       const std::vector<double>& depths, bool with_B) {
  DefectScan out;
  out.depths = depths;
  int dim = 2 * domain.n;
  for (double t : depths) {
    std::vector<double> z(dim);
    for (int k = 0; k < dim; ++k)
      z[k] = bs.point[k] + t * bs.inward_normal[k];
    Taylor<double> rj = jet_eval(domain.ast, z, 6);
    out.rvals.push_back(rj.value());
    out.defects.push_back(std::abs(J_of_rho(rj, with_B) - 1.0));
  }

  out.exact = true;
  for (double d : out.defects)
    if (!(d < 1e-13)) out.exact = false;
  if (out.exact) {
    out.slope = std::nan("");
    return out;
  }

  std::vector<std::pair<double, double>> pts;  // (log|r|, log defect)
  for (std::size_t i = 0; i < out.defects.size(); ++i)
    if (out.defects[i] > 0.0 && out.rvals[i] != 0.0)
      pts.emplace_back(std::log(std::abs(out.rvals[i])),
                       std::log(out.defects[i]));
  std::size_t take = std::min<std::size_t>(3, pts.size());
  if (take < 2)
    throw CalcError("defect scan: not enough usable samples for a slope");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = pts.size() - take; i < pts.size(); ++i) {
    sx += pts[i].first;
    sy += pts[i].second;
    sxx += pts[i].first * pts[i].first;
    sxy += pts[i].first * pts[i].second;
  }
  double nf = double(take);
  out.slope = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
  return out;
}

}  // namespace spc
