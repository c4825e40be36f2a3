#include "geometry/sample.hpp"

#include <cmath>

#include "jets/jet_eval.hpp"
#include "support/halton.hpp"
#include "support/parallel.hpp"
#include "support/rng.hpp"

namespace spc {
namespace {

constexpr double kTMax = 1e3;         // sampling box radius along a ray
constexpr double kBisectTol = 1e-12;  // before Newton polish

std::vector<double> real_gradient(const ExprPtr& ast,
                                  const std::vector<double>& p) {
  Taylor<double> jet = jet_eval(ast, p, 1);
  std::vector<double> g(p.size());
  std::vector<std::uint8_t> a(p.size(), 0);
  for (std::size_t v = 0; v < p.size(); ++v) {
    a[v] = 1;
    g[v] = jet.coeff(a);
    a[v] = 0;
  }
  return g;
}

std::vector<double> direction_for(std::size_t i, int dim,
                                  const std::vector<double>& shifts) {
  std::vector<double> d(dim, 0.0);
  if (i < std::size_t(2 * dim)) {
    d[i / 2] = (i % 2 == 0) ? 1.0 : -1.0;
    return d;
  }
  // Cranley-Patterson rotated Halton components through Box-Muller
  static const unsigned primes[16] = {2,  3,  5,  7,  11, 13, 17, 19,
                                      23, 29, 31, 37, 41, 43, 47, 53};
  std::uint64_t k = i - 2 * dim + 1;
  for (int p = 0; 2 * p < dim; ++p) {
    double u1 = halton(k, primes[2 * p]) + shifts[2 * p];
    double u2 = halton(k, primes[2 * p + 1]) + shifts[2 * p + 1];
    u1 -= std::floor(u1);
    u2 -= std::floor(u2);
    u1 = (u1 * 4503599627370495.0 + 1.0) / 4503599627370496.0;
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 6.283185307179586477 * u2;
    d[2 * p] = rad * std::cos(ang);
    if (2 * p + 1 < dim) d[2 * p + 1] = rad * std::sin(ang);
  }
  double norm = 0.0;
  for (double c : d) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : d) c /= norm;
  return d;
}

}  // namespace

std::optional<BoundarySample> cross_ray(const DomainSpec& domain,
                                        const std::vector<double>& dir) {
  const std::vector<double>& p0 = domain.interior_point;
  auto at = [&](double t) {
    std::vector<double> p(p0.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = p0[k] + t * dir[k];
    return p;
  };
  auto rof = [&](double t) { return eval_at<double>(*domain.ast, at(t).data()); };

  if (!(rof(0.0) < 0.0)) throw GeomError("interior point is not interior");

  // coarse march to the first sign change; step grows once past unit scale
  double a = 0.0, b = 0.0, h = 0.02;
  bool found = false;
  for (double t = h; t <= kTMax; t += h) {
    if (rof(t) >= 0.0) {
      b = t;
      a = t - h;
      found = true;
      break;
    }
    a = t;
    if (t > 2.0) h *= 1.5;
  }
  if (!found) return std::nullopt;

  double t = 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    t = 0.5 * (a + b);
    double rm = rof(t);
    if (std::abs(rm) < kBisectTol) break;
    (rm < 0.0 ? a : b) = t;
  }

  std::vector<double> p = at(t);
  for (int polish = 0; polish < 2; ++polish) {
    double r = eval_at<double>(*domain.ast, p.data());
    std::vector<double> g = real_gradient(domain.ast, p);
    double g2 = 0.0;
    for (double c : g) g2 += c * c;
    if (g2 == 0.0) break;
    for (std::size_t k = 0; k < p.size(); ++k) p[k] -= r * g[k] / g2;
  }

  BoundarySample s;
  s.point = p;
  s.residual = std::abs(eval_at<double>(*domain.ast, p.data()));
  std::vector<double> g = real_gradient(domain.ast, p);
  double gn = 0.0;
  for (double c : g) gn += c * c;
  gn = std::sqrt(gn);
  if (gn == 0.0) throw GeomError("vanishing gradient at boundary point");
  s.inward_normal.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) s.inward_normal[k] = -g[k] / gn;
  s.frame = tangent_frame(wirtinger(jet_eval(domain.ast, p, 1)));
  return s;
}

SampleResult sample_boundary(const DomainSpec& domain, int count,
                             std::uint64_t seed, int threads) {
  int dim = 2 * domain.n;
  std::vector<double> shifts(dim + 1);
  for (std::size_t k = 0; k < shifts.size(); ++k)
    shifts[k] = seed == 0 ? 0.0 : Rng(seed, k).uniform();

  auto rays = run_indexed<std::optional<BoundarySample>>(
      std::size_t(count), threads, [&](std::size_t i) {
        return cross_ray(domain, direction_for(i, dim, shifts));
      });

  SampleResult out;
  out.requested = count;
  for (auto& r : rays) {
    if (r)
      out.samples.push_back(std::move(*r));
    else
      ++out.skipped;
  }
  return out;
}

std::vector<Eigen::VectorXcd> tangent_frame(const WirtingerData& w) {
  int n = w.n;
  double gn = w.grad.norm();
  if (!(gn > 1e-14)) throw GeomError("vanishing gradient: no tangent frame");
  Eigen::VectorXcd nu = w.grad.conjugate() / gn;  // v in H_z iff v dot nu = 0

  int drop = 0;
  for (int j = 1; j < n; ++j)
    if (std::abs(nu(j)) > std::abs(nu(drop))) drop = j;

  std::vector<Eigen::VectorXcd> frame;
  for (int j = 0; j < n; ++j) {
    if (j == drop) continue;
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(j) = 1.0;
    v -= nu * nu.dot(v);
    for (const auto& u : frame) v -= u * u.dot(v);
    double vn = v.norm();
    if (vn < 1e-10) throw GeomError("tangent frame degenerated");
    frame.push_back(v / vn);
  }
  return frame;
}

}  // namespace spc
