#include "criteria/criteria.hpp"

#include <cmath>
#include <limits>

#include "jets/jet_eval.hpp"
#include "support/parallel.hpp"

namespace spc {

namespace {

// contractions shared by the boundary criteria; all built from the order-4
// Wirtinger tensors and the raised-index data
struct Tensors {
  Eigen::VectorXcd lap_rk;   // a^{ij} r_{ij k}
  Eigen::MatrixXcd lap_rkl;  // a^{ij} r_{ij k lbar}
  Eigen::VectorXcd u;        // r^i r_{ik}
};

Tensors tensors(const WirtingerData& w, const RaisedData& rd) {
  int n = w.n;
  Tensors t;
  t.lap_rk = Eigen::VectorXcd::Zero(n);
  t.lap_rkl = Eigen::MatrixXcd::Zero(n, n);
  t.u = Eigen::VectorXcd::Zero(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        t.lap_rk(k) += rd.atilde(i, j) * w.third(i, j, k);
        for (int l = 0; l < n; ++l)
          t.lap_rkl(k, l) += rd.atilde(i, j) * w.fourth(i, j, k, l);
      }
      t.u(k) += rd.rup(i) * w.hess_hol(i, k);
    }
  }
  return t;
}

// -2 Re(r^k lap r_k)/(n+1), the tail shared by the bound assemblies
double common_tail(const RaisedData& rd, const Tensors& t) {
  cplx s = 0;
  for (int k = 0; k < rd.n; ++k) s += rd.rup(k) * t.lap_rk(k);
  return -2.0 * s.real() / (rd.n + 1);
}

double contract_atilde(const RaisedData& rd, const Eigen::MatrixXcd& b) {
  cplx s = 0;
  for (int k = 0; k < rd.n; ++k)
    for (int l = 0; l < rd.n; ++l) s += rd.atilde(k, l) * b(k, l);
  return s.real();
}

// a^{iq} r^{pj} r_{ij k} conj(r_{qp l}) summed over i,q,p,j
Eigen::MatrixXcd mid_inverse(const WirtingerData& w, const RaisedData& rd) {
  int n = w.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      cplx s = 0;
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q)
          for (int p = 0; p < n; ++p)
            for (int j = 0; j < n; ++j)
              s += rd.atilde(i, q) * rd.rinv(p, j) * w.third(i, j, k) *
                   std::conj(w.third(q, p, l));
      m(k, l) = s;
    }
  return m;
}

// a^{iq} r^p conj(r^j) r_{ij k} conj(r_{qp l})
Eigen::MatrixXcd mid_rank_one(const WirtingerData& w, const RaisedData& rd) {
  int n = w.n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      cplx s = 0;
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q)
          for (int p = 0; p < n; ++p)
            for (int j = 0; j < n; ++j)
              s += rd.atilde(i, q) * rd.rup(p) * std::conj(rd.rup(j)) *
                   w.third(i, j, k) * std::conj(w.third(q, p, l));
      m(k, l) = s;
    }
  return m;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double L2(const WirtingerData& w, const RaisedData& rd, const LogJDerivs& d,
          L2Variant variant) {
  int n = w.n;
  double s = rd.grad_norm_sq;
  double lap = tilde_laplacian(rd, d.hessian);
  double gn = tilde_grad_norm_sq(rd, d.gradient);
  cplx rlj = R_op(rd, d.gradient);
  double c = variant == L2Variant::canonical
                 ? 1.0 / (double(n + 1) * (n + 1))
                 : 1.0;
  return 1.0 + s * lap / (double(n) * (n + 1)) - 2.0 * rlj.real() / (n + 1) -
         c * s * gn;
}

DetHRho detH_rho_boundary(const WirtingerData& w, const RaisedData& rd,
                          const LogJDerivs& d) {
  int n = w.n;
  double j = J_product(w, rd);
  if (!(j > 0.0)) throw CalcError("J <= 0: boundary determinant undefined");
  double jfac = std::pow(j, -double(n) / (n + 1));
  DetHRho out;
  out.primary =
      w.hess.determinant().real() * L2(w, rd, d, L2Variant::canonical) * jfac;

  double b0 = tilde_laplacian(rd, d.hessian) / (2.0 * n * (n + 1));
  Eigen::MatrixXcd m =
      w.hess -
      (w.grad * d.gradient.adjoint() + d.gradient * w.grad.adjoint()) /
          double(n + 1) +
      2.0 * b0 * (w.grad * w.grad.adjoint());
  out.cross = m.determinant().real() * jfac;
  out.rel_disagreement =
      std::abs(out.primary - out.cross) /
      std::max({std::abs(out.primary), std::abs(out.cross), 1e-300});
  return out;
}

ETriple E_tilde(const WirtingerData& w, const RaisedData& rd,
                const LogJDerivs& d) {
  int n = w.n;
  double s = rd.grad_norm_sq;
  Tensors t = tensors(w, rd);
  double tail = common_tail(rd, t);
  double pref = s / (double(n) * (n + 1));

  ETriple out;
  {
    double lap = tilde_laplacian(rd, d.hessian);
    double gn = tilde_grad_norm_sq(rd, d.gradient);
    cplx rlap = 0;
    for (int k = 0; k < n; ++k) rlap += rd.rup(k) * t.lap_rk(k);
    out.value =
        pref * (lap - n * gn / (n + 1) - 2.0 * n * rlap.real() / s);
  }

  Eigen::MatrixXcd lower = t.lap_rkl - mid_inverse(w, rd);
  Eigen::MatrixXcd upper = t.lap_rkl + mid_rank_one(w, rd);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      lower(k, l) -= t.lap_rk(k) * std::conj(t.lap_rk(l)) +
                     double(n) * t.u(k) * std::conj(t.u(l)) / (s * s);
      cplx h = 0;
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q)
          h += rd.atilde(i, q) * w.hess_hol(i, k) *
               std::conj(w.hess_hol(q, l));
      upper(k, l) += 2.0 * h / s;
    }
  out.lower = pref * contract_atilde(rd, lower) + tail;
  out.upper = pref * contract_atilde(rd, upper) + tail;
  return out;
}

double S_r(const WirtingerData& w) {
  if (w.n != 1) throw CalcError("S_r is defined only in one complex variable");
  cplx r1 = w.grad(0);
  double a = std::abs(r1);
  if (a == 0.0)
    throw CalcError(
        "degenerate defining function: gradient vanishes at the point");
  cplx e2t = std::conj(r1) * std::conj(r1) / (a * a);
  return w.hess(0, 0).real() - (e2t * w.hess_hol(0, 0)).real();
}

double convex_sufficient(const WirtingerData& w, const RaisedData& rd) {
  int n = w.n;
  double s = rd.grad_norm_sq;
  Tensors t = tensors(w, rd);
  Eigen::MatrixXcd b = t.lap_rkl - mid_inverse(w, rd);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      b(k, l) -= t.lap_rk(k) * std::conj(t.lap_rk(l));
  return double(n - 1) / (n + 1) +
         (s / (double(n) * (n + 1))) * contract_atilde(rd, b) +
         common_tail(rd, t);
}

double convex_companion(const WirtingerData& w, const RaisedData& rd) {
  int n = w.n;
  double s = rd.grad_norm_sq;
  Tensors t = tensors(w, rd);
  cplx rr = 0;  // r^k r^i r_{ik}
  for (int k = 0; k < n; ++k) rr += rd.rup(k) * t.u(k);
  cplx au = 0;  // a^{kl} u_k conj(u_l)
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      au += rd.atilde(k, l) * t.u(k) * std::conj(t.u(l));
  return 2.0 / (n + 1) - 2.0 * rr.real() / ((n + 1) * s) -
         au.real() / ((n + 1) * s);
}

RicciValue pseudo_ricci(const WirtingerData& w, const RaisedData& rd,
                        const LogJDerivs& d, const Eigen::VectorXcd& w_vec,
                        const Eigen::VectorXcd& v_vec) {
  int n = w.n;
  for (const auto* v : {&w_vec, &v_vec}) {
    cplx pairing = 0;
    for (int j = 0; j < n; ++j) pairing += w.grad(j) * (*v)(j);
    if (std::abs(pairing) > 1e-8)
      throw CalcError(
          "pseudo-Ricci needs tangent vectors (sum_j r_j v_j = 0)");
  }
  double j = J_product(w, rd);
  if (!(j > 0.0)) throw CalcError("J <= 0: pseudo-Ricci undefined");
  cplx logj_term = 0, levi_term = 0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      logj_term += d.hessian(k, l) * w_vec(k) * std::conj(v_vec(l));
      levi_term += w.hess(k, l) * w_vec(k) * std::conj(v_vec(l));
    }
  RicciValue out;
  out.einstein_value =
      double(n) * (w.hess.determinant().real() / j) * levi_term;
  out.value = -logj_term + out.einstein_value;
  out.einstein_mode =
      std::abs(j - 1.0) <= 1e-8 && d.gradient.norm() <= 1e-8;
  return out;
}

CriteriaPointData criteria_point(const Taylor<double>& rjet,
                                 const std::vector<Eigen::VectorXcd>& frame,
                                 L2Variant variant) {
  WirtingerData w = wirtinger(rjet);
  RaisedData rd = raise(w);
  LogJDerivs d = logJ_derivatives(w, rd, rjet);

  CriteriaPointData out;
  out.l2 = L2(w, rd, d, variant);
  out.l2_alt = L2(w, rd, d,
                  variant == L2Variant::canonical ? L2Variant::definition
                                                  : L2Variant::canonical);
  ETriple e = E_tilde(w, rd, d);
  out.e_tilde = e.value;
  out.e_lower = e.lower;
  out.e_upper = e.upper;
  DetHRho dh = detH_rho_boundary(w, rd, d);
  out.detH_rho_boundary = dh.primary;
  out.detH_rho_cross = dh.cross;
  out.detH_rho_disagreement = dh.rel_disagreement;
  out.s_r = w.n == 1 ? S_r(w) : kNaN;
  out.conv_crit_lhs = w.n > 1 ? convex_sufficient(w, rd) : kNaN;

  if (frame.empty()) {
    out.pseudo_ricci_min = kNaN;
  } else {
    int m = int(frame.size());
    Eigen::MatrixXcd ric(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        ric(a, b) = pseudo_ricci(w, rd, d, frame[a], frame[b]).value;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ric);
    out.pseudo_ricci_min = es.eigenvalues().minCoeff();
  }
  return out;
}

double real_tangent_hessian_min_eig(const Taylor<double>& rjet) {
  int dim = rjet.space().dim();
  Eigen::VectorXd g(dim);
  Eigen::MatrixXd h(dim, dim);
  std::vector<std::uint8_t> a(dim, 0);
  for (int i = 0; i < dim; ++i) {
    a[i] = 1;
    g(i) = rjet.deriv(a);
    for (int j = i; j < dim; ++j) {
      a[j] += 1;
      h(i, j) = h(j, i) = rjet.deriv(a);
      a[j] -= 1;
    }
    a[i] = 0;
  }
  if (g.norm() < 1e-14)
    throw CalcError("vanishing real gradient: tangent plane undefined");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd basis = q.rightCols(dim - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(basis.transpose() * h *
                                                    basis);
  return es.eigenvalues().minCoeff();
}

const char* to_string(SuperPsc c) {
  switch (c) {
    case SuperPsc::strictly_super_psc: return "strictly_super_psc";
    case SuperPsc::super_psc: return "super_psc";
    case SuperPsc::not_super_psc: return "not_super_psc";
    default: return "inconclusive";
  }
}

const char* to_string(Convexity c) {
  switch (c) {
    case Convexity::strictly_convex: return "strictly_convex";
    case Convexity::convex: return "convex";
    default: return "not_convex";
  }
}

ClassifyResult classify(const DomainSpec& domain, int n_samples,
                        std::uint64_t seed, L2Variant variant, int threads) {
  SampleResult sr = sample_boundary(domain, n_samples, seed, threads);
  if (sr.samples.empty())
    throw GeomError("classification failed: no boundary found along any ray");

  struct PerSample {
    CriteriaPointData cpd;
    double a = 0;
    double ceig = 0;
    std::string error;
  };
  std::vector<PerSample> per =
      run_indexed<PerSample>(sr.samples.size(), threads, [&](std::size_t i) {
        PerSample p;
        try {
          Taylor<double> jet = jet_eval(domain.ast, sr.samples[i].point, 4);
          p.a = auto_shift(jet);
          Taylor<double> used = p.a > 0 ? psh_shift(jet, p.a) : jet;
          p.cpd = criteria_point(used, sr.samples[i].frame, variant);
          p.ceig = real_tangent_hessian_min_eig(jet);
        } catch (const std::exception& e) {
          p.error = e.what();
        }
        return p;
      });
  for (const auto& p : per)
    if (!p.error.empty()) throw CalcError(p.error);

  ClassifyResult out;
  out.samples = sr.samples;
  out.points.reserve(per.size());
  std::size_t worst = 0;
  double margin = per[0].cpd.l2;
  double min_eig = per[0].ceig;
  double max_disagreement = 0;
  for (std::size_t i = 0; i < per.size(); ++i) {
    out.points.push_back(per[i].cpd);
    out.shift_a.push_back(per[i].a);
    out.conv_min_eig.push_back(per[i].ceig);
    if (per[i].cpd.l2 < margin) {
      margin = per[i].cpd.l2;
      worst = i;
    }
    min_eig = std::min(min_eig, per[i].ceig);
    max_disagreement =
        std::max(max_disagreement, per[i].cpd.detH_rho_disagreement);
  }

  Verdict& v = out.verdict;
  v.margin = margin;
  v.worst_point = sr.samples[worst];
  v.convexity = min_eig > 1e-8    ? Convexity::strictly_convex
                : min_eig >= -1e-8 ? Convexity::convex
                                   : Convexity::not_convex;
  if (sr.skipped > 0) {
    v.classification = SuperPsc::inconclusive;
    v.reason = "sampling gap: " + std::to_string(sr.skipped) + " of " +
               std::to_string(sr.requested) +
               " rays found no boundary crossing";
  } else if (max_disagreement > 1e-6) {
    v.classification = SuperPsc::inconclusive;
    v.reason =
        "conditioning: determinant assemblies disagree by " +
        std::to_string(max_disagreement) + " at a sample";
  } else if (margin > 1e-7) {
    v.classification = SuperPsc::strictly_super_psc;
  } else if (margin >= -1e-7) {
    v.classification = SuperPsc::super_psc;
    v.at_tolerance = true;
  } else {
    v.classification = SuperPsc::not_super_psc;
  }
  return out;
}

}  // namespace spc
