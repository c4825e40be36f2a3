#include "solver/radial.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace spc {

namespace {

struct Stencil3 {
  double w0, w1, w2;
};

// first derivative at t0 from (tm, t0, tp)
Stencil3 first_centered(double tm, double t0, double tp) {
  double a = t0 - tm, b = tp - t0;
  return {-b / (a * (a + b)), (b - a) / (a * b), a / (b * (a + b))};
}

// second derivative at t0 from (tm, t0, tp)
Stencil3 second_centered(double tm, double t0, double tp) {
  double a = t0 - tm, b = tp - t0;
  return {2 / (a * (a + b)), -2 / (a * b), 2 / (b * (a + b))};
}

// first derivative at t0 from (t0, t1, t2), 2nd order
Stencil3 first_one_sided(double t0, double t1, double t2) {
  double a = t1 - t0, b = t2 - t0;
  double w1 = b * b / (a * b * (b - a));
  double w2 = -a * a / (a * b * (b - a));
  return {-(w1 + w2), w1, w2};
}

double ipow(double x, int k) {
  double out = 1;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// derivative-m weights at t0 for an arbitrary node set (small Vandermonde)
std::vector<double> fd_weights(const std::vector<double>& ts, double t0,
                               int m) {
  int k = int(ts.size());
  Eigen::MatrixXd a(k, k);
  for (int row = 0; row < k; ++row)
    for (int col = 0; col < k; ++col) a(row, col) = ipow(ts[col] - t0, row);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(k);
  double fact = 1;
  for (int i = 2; i <= m; ++i) fact *= i;
  b(m) = fact;
  Eigen::VectorXd w = a.fullPivLu().solve(b);
  return {w.data(), w.data() + k};
}

}  // namespace

double radial_residual(const RadialProfile& p, int node) {
  int last = int(p.t.size()) - 1;
  if (node < 0 || node > last)
    throw SolverError("residual node out of range");
  if (last < 2) throw SolverError("profile needs at least 3 nodes");
  double en = std::exp((p.n + 1) * p.f[node]);
  if (node == 0) {
    Stencil3 s = first_one_sided(p.t[0], p.t[1], p.t[2]);
    double fp = s.w0 * p.f[0] + s.w1 * p.f[1] + s.w2 * p.f[2];
    return ipow(fp, p.n) - en;
  }
  double fp, fpp;
  if (node == last) {
    // left-sided closure diagnostic on the final 3 nodes
    std::vector<double> ts{p.t[last - 2], p.t[last - 1], p.t[last]};
    std::vector<double> w1 = fd_weights(ts, p.t[last], 1);
    std::vector<double> w2 = fd_weights(ts, p.t[last], 2);
    fp = w1[0] * p.f[last - 2] + w1[1] * p.f[last - 1] + w1[2] * p.f[last];
    fpp = w2[0] * p.f[last - 2] + w2[1] * p.f[last - 1] + w2[2] * p.f[last];
  } else {
    Stencil3 s1 = first_centered(p.t[node - 1], p.t[node], p.t[node + 1]);
    Stencil3 s2 = second_centered(p.t[node - 1], p.t[node], p.t[node + 1]);
    fp = s1.w0 * p.f[node - 1] + s1.w1 * p.f[node] + s1.w2 * p.f[node + 1];
    fpp = s2.w0 * p.f[node - 1] + s2.w1 * p.f[node] + s2.w2 * p.f[node + 1];
  }
  return ipow(fp, p.n - 1) * (fp + p.t[node] * fpp) - en;
}

RadialProfile make_profile(int n, std::vector<double> t,
                           std::vector<double> f) {
  if (n < 1) throw SolverError("dimension must be >= 1");
  if (t.size() != f.size() || t.size() < 3)
    throw SolverError("grid and values must match and hold >= 3 nodes");
  RadialProfile p;
  p.n = n;
  p.t = std::move(t);
  p.f = std::move(f);
  int last = int(p.t.size()) - 1;
  p.fp.resize(last + 1);
  p.fpp.resize(last + 1);
  p.rho.resize(last + 1);
  p.residual.resize(last + 1);
  int wsize = std::min(5, last + 1);
  for (int k = 0; k <= last; ++k) {
    int lo = std::clamp(k - wsize / 2, 0, last - (wsize - 1));
    std::vector<double> ts(p.t.begin() + lo, p.t.begin() + lo + wsize);
    std::vector<double> w1 = fd_weights(ts, p.t[k], 1);
    std::vector<double> w2 = fd_weights(ts, p.t[k], 2);
    double d1 = 0, d2 = 0;
    for (int j = 0; j < wsize; ++j) {
      d1 += w1[j] * p.f[lo + j];
      d2 += w2[j] * p.f[lo + j];
    }
    p.fp[k] = d1;
    p.fpp[k] = d2;
    p.rho[k] = -std::exp(-p.f[k]);
  }
  for (int k = 0; k <= last; ++k) p.residual[k] = radial_residual(p, k);
  return p;
}

RadialSolve solve_radial(int n, int intervals, double eps_grid, double tol) {
  if (n < 1) throw SolverError("dimension must be >= 1");
  if (!(eps_grid > 0.0 && eps_grid <= 0.1))
    throw SolverError("boundary offset must lie in (0, 0.1]");
  if (intervals < 8) throw SolverError("need at least 8 grid intervals");
  if (!(tol > 0.0)) throw SolverError("tolerance must be positive");

  const int N = intervals;
  std::vector<double> t(N + 1);
  for (int k = 0; k <= N; ++k)
    t[k] = 1.0 - std::pow(eps_grid, double(k) / N);
  t[N] = 1.0 - eps_grid;

  Eigen::VectorXd f = Eigen::VectorXd::Zero(N + 1);
  f[N] = -std::log(eps_grid);

  Stencil3 wl = first_one_sided(t[0], t[1], t[2]);
  std::vector<Stencil3> W1(N - 1), W2(N - 1);
  for (int k = 1; k < N; ++k) {
    W1[k - 1] = first_centered(t[k - 1], t[k], t[k + 1]);
    W2[k - 1] = second_centered(t[k - 1], t[k], t[k + 1]);
  }

  auto derivs = [&](const Eigen::VectorXd& v, Eigen::VectorXd& fp,
                    Eigen::VectorXd& fpp) {
    fp.resize(N - 1);
    fpp.resize(N - 1);
    for (int k = 1; k < N; ++k) {
      fp[k - 1] = W1[k - 1].w0 * v[k - 1] + W1[k - 1].w1 * v[k] +
                  W1[k - 1].w2 * v[k + 1];
      fpp[k - 1] = W2[k - 1].w0 * v[k - 1] + W2[k - 1].w1 * v[k] +
                   W2[k - 1].w2 * v[k + 1];
    }
  };

  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd r(N);
    double fp0 = wl.w0 * v[0] + wl.w1 * v[1] + wl.w2 * v[2];
    r[0] = ipow(fp0, n) - std::exp((n + 1) * v[0]);
    Eigen::VectorXd fp, fpp;
    derivs(v, fp, fpp);
    for (int k = 1; k < N; ++k)
      r[k] = ipow(fp[k - 1], n - 1) * (fp[k - 1] + t[k] * fpp[k - 1]) -
             std::exp((n + 1) * v[k]);
    return r;
  };

  auto scaled_norm = [&](const Eigen::VectorXd& r, const Eigen::VectorXd& v) {
    double m = 0;
    for (int k = 0; k < N; ++k) {
      double s = std::abs(r[k]) * std::exp(-(n + 1) * v[k]);
      if (!std::isfinite(s)) return std::numeric_limits<double>::infinity();
      m = std::max(m, s);
    }
    return m;
  };

  constexpr double kFloor = 1e-8;
  constexpr double kPicardUntil = 3.0;
  constexpr double kTrust = 2.0;
  const int maxiter = 60;

  // Attainable scaled-residual floor: the f'' stencil sums terms of size
  // |w2·f| with near-total cancellation, so rounding noise in a residual row
  // is ~eps times that magnitude. Grows like h_min^-2 under refinement.
  auto noise_floor = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd fp, fpp;
    derivs(v, fp, fpp);
    double m = kFloor;
    for (int k = 1; k < N; ++k) {
      const Stencil3& s2 = W2[k - 1];
      double cancel = std::abs(s2.w0 * v[k - 1]) + std::abs(s2.w1 * v[k]) +
                      std::abs(s2.w2 * v[k + 1]);
      double amp = ipow(std::abs(fp[k - 1]), n - 1) * t[k] * cancel *
                   std::exp(-(n + 1) * v[k]);
      m = std::max(m, 8 * std::numeric_limits<double>::epsilon() * amp);
    }
    return m;
  };

  Eigen::VectorXd r = residual(f);
  int its = 0;
  double nr = scaled_norm(r, f);
  for (int it = 0; it < maxiter; ++it) {
    nr = scaled_norm(r, f);
    if (nr < tol) break;
    its = it + 1;

    Eigen::VectorXd fp, fpp;
    derivs(f, fp, fpp);
    double fp0 = wl.w0 * f[0] + wl.w1 * f[1] + wl.w2 * f[2];
    bool picard = std::min(fp.minCoeff(), fp0) < 1e-3 || nr > kPicardUntil;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * N);
    auto set = [&](int i, int j, double v) {
      if (j >= 0 && j < N) trip.emplace_back(i, j, v);
    };
    if (picard) {
      double a0 = n > 1 ? std::max(ipow(fp0, n - 1), 1.0) : 1.0;
      const double wls[3] = {wl.w0, wl.w1, wl.w2};
      for (int c = 0; c < 3; ++c) set(0, c, n * a0 * wls[c]);
      set(0, 0, -(n + 1) * std::exp((n + 1) * f[0]));
      for (int k = 1; k < N; ++k) {
        double a = n > 1 ? std::max(ipow(fp[k - 1], n - 1), 1.0) : 1.0;
        const double s1[3] = {W1[k - 1].w0, W1[k - 1].w1, W1[k - 1].w2};
        const double s2[3] = {W2[k - 1].w0, W2[k - 1].w1, W2[k - 1].w2};
        for (int idx = 0; idx < 3; ++idx)
          set(k, k - 1 + idx, a * (s1[idx] + t[k] * s2[idx]));
        set(k, k, -(n + 1) * std::exp((n + 1) * f[k]));
      }
    } else {
      const double wls[3] = {wl.w0, wl.w1, wl.w2};
      for (int c = 0; c < 3; ++c) set(0, c, n * ipow(fp0, n - 1) * wls[c]);
      set(0, 0, -(n + 1) * std::exp((n + 1) * f[0]));
      for (int k = 1; k < N; ++k) {
        double fpk = fp[k - 1], fppk = fpp[k - 1];
        const double s1[3] = {W1[k - 1].w0, W1[k - 1].w1, W1[k - 1].w2};
        const double s2[3] = {W2[k - 1].w0, W2[k - 1].w1, W2[k - 1].w2};
        for (int idx = 0; idx < 3; ++idx) {
          double v = (n - 1) * ipow(fpk, std::max(n - 2, 0)) * s1[idx] *
                         (fpk + t[k] * fppk) +
                     ipow(fpk, n - 1) * (s1[idx] + t[k] * s2[idx]);
          set(k, k - 1 + idx, v);
        }
        set(k, k, -(n + 1) * std::exp((n + 1) * f[k]));
      }
    }

    Eigen::SparseMatrix<double> jac(N, N);
    jac.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
    if (lu.info() != Eigen::Success)
      throw SolverError("singular collocation Jacobian at iteration " +
                        std::to_string(its));
    Eigen::VectorXd step_inner = lu.solve(-r);

    Eigen::VectorXd step = Eigen::VectorXd::Zero(N + 1);
    step.head(N) = step_inner;
    double lam =
        std::min(1.0, kTrust / std::max(step.cwiseAbs().maxCoeff(), 1e-300));
    bool ok = false;
    for (int h = 0; h < 21; ++h) {
      Eigen::VectorXd fn = f + lam * step;
      Eigen::VectorXd rn = residual(fn);
      if (scaled_norm(rn, fn) < nr) {
        f = fn;
        r = rn;
        ok = true;
        break;
      }
      lam /= 2;
    }
    if (!ok) {
      if (nr <= noise_floor(f)) break;  // round-off floor, accept the iterate
      throw SolverError("no descent direction, residual stalled at " +
                        sci(nr));
    }
  }

  nr = scaled_norm(residual(f), f);
  if (nr >= tol && nr > noise_floor(f))
    throw SolverError("did not converge: scaled residual " + sci(nr) +
                      " after " + std::to_string(its) + " iterations");

  RadialSolve out;
  out.profile = make_profile(n, t, {f.data(), f.data() + N + 1});
  out.iterations = its;
  out.scaled_residual = nr;
  out.hit_tolerance = nr < tol;
  return out;
}

void write_radial_csv(const RadialProfile& p, std::ostream& os) {
  os << "# schema: superpsc.radial-profile.v1\n";
  os << "t,f,fp,rho,residual\n";
  char buf[200];
  for (std::size_t k = 0; k < p.t.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.t[k],
                  p.f[k], p.fp[k], p.rho[k], p.residual[k]);
    os << buf;
  }
}

}  // namespace spc
