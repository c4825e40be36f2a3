#include "spectrum/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "jets/jet_eval.hpp"
#include "ma/fefferman.hpp"
#include "support/parallel.hpp"
#include "support/rng.hpp"

namespace spc {

namespace {

void check_point(const DomainSpec& dom, const std::vector<double>& p) {
  if (int(p.size()) != 2 * dom.n)
    throw SpectrumError("point dimension does not match the domain");
}

MetricData metric_from(int n, const std::vector<double>& p,
                       const WirtingerData& w) {
  if (!(w.r < 0.0))
    throw SpectrumError("metric needs an interior point (r < 0)");
  double mr = -w.r;
  MetricData md;
  md.n = n;
  md.point = p;
  md.g = w.hess / mr + (w.grad * w.grad.adjoint()) / (mr * mr);
  Eigen::LLT<Eigen::MatrixXcd> llt(md.g);
  if (llt.info() != Eigen::Success)
    throw SpectrumError("metric is not positive definite at this point");
  md.ginv = md.g.inverse();
  md.det_g = md.g.determinant().real();
  return md;
}

// boundary mollifier: 1 deep inside, 0 for u <= eps, C^inf in between
double chi(double u, double eps) {
  return u > eps ? std::exp(-eps / (u - eps)) : 0.0;
}

double chi_prime(double u, double eps) {
  if (u <= eps) return 0.0;
  double d = u - eps;
  return std::exp(-eps / d) * eps / (d * d);
}

struct GlRule {
  std::vector<double> x, w;
};

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on the recurrence
GlRule gauss_legendre(int m) {
  GlRule r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(3.14159265358979324 * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[m - 1 - i] = x;
    double wt = 2.0 / ((1.0 - x * x) * dp * dp);
    r.w[i] = wt;
    r.w[m - 1 - i] = wt;
  }
  return r;
}

template <class F>
double gl_panel(const F& f, double a, double b, const GlRule& g) {
  double mid = (a + b) / 2, half = (b - a) / 2, acc = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    acc += g.w[i] * f(mid + half * g.x[i]);
  return acc * half;
}

// bisect until one panel and its two halves agree to tol; sums estimates
template <class F>
double adaptive_panel(const F& f, double a, double b, double tol,
                      const GlRule& g, int depth, double* err_out) {
  double coarse = gl_panel(f, a, b, g);
  double mid = (a + b) / 2;
  double fine = gl_panel(f, a, mid, g) + gl_panel(f, mid, b, g);
  double est = std::abs(fine - coarse);
  if (est <= tol || depth >= 30) {
    *err_out += est;
    return fine;
  }
  return adaptive_panel(f, a, mid, tol / 2, g, depth + 1, err_out) +
         adaptive_panel(f, mid, b, tol / 2, g, depth + 1, err_out);
}

// panel edges hugging the mollifier ramp near eps, then doubling to 1
std::vector<double> radial_panels(double eps) {
  std::vector<double> pts{eps};
  double x = 1.02 * eps;
  while (x < 0.5) {
    pts.push_back(x);
    x *= 2;
  }
  pts.push_back(0.5);
  pts.push_back(0.75);
  pts.push_back(1.0);
  return pts;
}

template <class F>
double integrate(const F& f, const std::vector<double>& pts, const GlRule& g,
                 double* err_out) {
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k)
    acc += adaptive_panel(f, pts[k], pts[k + 1], 1e-12, g, 0, err_out);
  return acc;
}

void check_scan_args(int n, double eps_c, int panel_points) {
  if (n < 1) throw SpectrumError("dimension must be >= 1");
  if (!(eps_c > 0.0) || eps_c > 0.05)
    throw SpectrumError("cutoff depth must be in (0, 0.05]");
  if (panel_points < 4 || panel_points > 256)
    throw SpectrumError("panel size out of range [4, 256]");
}

void check_exponent(int n, double s) {
  if (!(s > 0.5 * n))
    throw SpectrumError("exponent " + std::to_string(s) +
                        " is not square-integrable (needs s > n/2)");
}

}  // namespace

MetricData metric_at(const DomainSpec& dom, const std::vector<double>& p) {
  check_point(dom, p);
  return metric_from(dom.n, p, wirtinger(jet_eval(dom.ast, p, 2)));
}

Eigen::MatrixXcd ricci_at(const DomainSpec& dom, const std::vector<double>& p) {
  check_point(dom, p);
  int n = dom.n;
  Taylor<double> rjet = jet_eval(dom.ast, p, 4);
  if (!(rjet.value() < 0.0))
    throw SpectrumError("Ricci needs an interior point (r < 0)");
  Taylor<cplx> u = (-log(-rjet)).cast<cplx>();
  TaylorMat h(n, std::vector<Taylor<cplx>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i][j] = wirt_jet(u, {i}, {j});
  Taylor<cplx> logdet = log(det_taylor(h));
  Eigen::MatrixXcd ric(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) ric(k, l) = -wirt_value(logdet, {k}, {l});
  return ric;
}

double einstein_deficit(const DomainSpec& dom, const std::vector<double>& p) {
  MetricData md = metric_at(dom, p);
  Eigen::MatrixXcd dev = ricci_at(dom, p) + double(md.n + 1) * md.g;
  return dev.norm() / md.g.norm();
}

double super_einstein_min_eig(const DomainSpec& dom,
                              const std::vector<double>& p) {
  MetricData md = metric_at(dom, p);
  Eigen::MatrixXcd dev = ricci_at(dom, p) + double(md.n + 1) * md.g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      (dev + dev.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

double laplacian(const DomainSpec& dom, const ExprPtr& f,
                 const std::vector<double>& p) {
  MetricData md = metric_at(dom, p);
  WirtingerData wf = wirtinger(jet_eval(f, p, 2));
  cplx acc = 0.0;
  for (int i = 0; i < md.n; ++i)
    for (int j = 0; j < md.n; ++j) acc += md.ginv(j, i) * wf.hess(i, j);
  return -4.0 * acc.real();
}

std::vector<RayleighPoint> rayleigh_scan(int n,
                                         const std::vector<double>& s_grid,
                                         double eps_c, int panel_points) {
  check_scan_args(n, eps_c, panel_points);
  for (double s : s_grid) check_exponent(n, s);
  GlRule rule = gauss_legendre(panel_points);
  std::vector<double> pts = radial_panels(eps_c);

  std::vector<RayleighPoint> rows;
  rows.reserve(s_grid.size());
  for (double s : s_grid) {
    // with u = 1-|z|^2 and phi = u^s chi(u), the ball integrals reduce to
    //   N = int 4 phi'(u)^2 (1-u)^n u^{1-n} du
    //   D = int   phi(u)^2  (1-u)^{n-1} u^{-(n+1)} du
    auto fnum = [&](double u) {
      double c = chi(u, eps_c);
      if (c == 0.0) return 0.0;
      double dphi = s * std::pow(u, s - 1) * c +
                    std::pow(u, s) * chi_prime(u, eps_c);
      return 4.0 * dphi * dphi * std::pow(1.0 - u, n) * std::pow(u, 1 - n);
    };
    auto fden = [&](double u) {
      double c = chi(u, eps_c);
      if (c == 0.0) return 0.0;
      double phi = std::pow(u, s) * c;
      return phi * phi * std::pow(1.0 - u, n - 1) * std::pow(u, -(n + 1));
    };
    double errn = 0.0, errd = 0.0;
    double nv = integrate(fnum, pts, rule, &errn);
    double dv = integrate(fden, pts, rule, &errd);
    double q = nv / dv;
    rows.push_back({s, q, (errn + q * errd) / dv});
  }
  return rows;
}

std::vector<double> default_s_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 39; ++k) g.push_back((105 + 5 * k) / 100.0);
  return g;
}

McEstimate rayleigh_mc(int n, double s, double eps_c, std::int64_t samples,
                       std::uint64_t seed, int threads) {
  check_scan_args(n, eps_c, 32);
  check_exponent(n, s);
  if (samples < 2) throw SpectrumError("need at least 2 samples");
  DomainSpec ball = builtin("ball", {{"n", double(n)}});

  using Pair = std::array<double, 2>;
  std::vector<Pair> vals =
      run_indexed<Pair>(std::size_t(samples), threads, [&](std::size_t i) {
        Rng rng(seed, i);
        // uniform in the unit ball of R^{2n}: normal direction, power radius
        std::vector<double> p(2 * n);
        double norm2 = 0.0;
        for (double& c : p) {
          c = rng.normal();
          norm2 += c * c;
        }
        double rad =
            std::pow(rng.uniform(), 1.0 / (2 * n)) / std::sqrt(norm2);
        for (double& c : p) c *= rad;

        WirtingerData w = wirtinger(jet_eval(ball.ast, p, 2));
        double u = -w.r;
        double c = chi(u, eps_c);
        if (c == 0.0) return Pair{0.0, 0.0};
        double phi = std::pow(u, s) * c;
        double dphi =
            s * std::pow(u, s - 1) * c + std::pow(u, s) * chi_prime(u, eps_c);
        MetricData md = metric_from(n, p, w);
        // d_i phi(u(z)) = -phi'(u) r_i
        Eigen::VectorXcd df = -dphi * w.grad;
        cplx q = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            q += md.ginv(b, a) * df(a) * std::conj(df(b));
        return Pair{4.0 * q.real() * md.det_g, phi * phi * md.det_g};
      });

  double sn = 0.0, sd = 0.0;
  for (const Pair& v : vals) {
    sn += v[0];
    sd += v[1];
  }
  double q = sn / sd;
  double var = 0.0;
  for (const Pair& v : vals) {
    double d = v[0] - q * v[1];
    var += d * d;
  }
  double m = double(samples);
  McEstimate mc;
  mc.quotient = q;
  mc.se = std::sqrt(var / (m - 1.0) / m) / (sd / m);
  mc.samples = samples;
  return mc;
}

void write_spectrum_csv(const std::vector<RayleighPoint>& rows,
                        std::ostream& os) {
  os << "# schema: superpsc.rayleigh-scan.v1\n";
  os << "s,quotient,stderr\n";
  char buf[96];
  for (const RayleighPoint& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.s, r.quotient,
                  r.errbar);
    os << buf;
  }
}

}  // namespace spc
