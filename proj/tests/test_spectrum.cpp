#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "jets/jet_eval.hpp"
#include "ma/fefferman.hpp"
#include "spectrum/spectrum.hpp"
#include "support/halton.hpp"
#include "support/rng.hpp"
#include "test_support.hpp"

using namespace spc;
using spc::testing::corpus;
using spc::testing::interior_points;

TEST_CASE("metric of the log potential on the ball") {
  DomainSpec ball = builtin("ball");

  MetricData m0 = metric_at(ball, {0, 0, 0, 0});
  CHECK((m0.g - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
  CHECK(m0.det_g == doctest::Approx(1.0).epsilon(1e-14));

  // closed form at (0.5, 0): hessian I/(3/4) plus the rank-one gradient term
  MetricData m1 = metric_at(ball, {0.5, 0, 0, 0});
  CHECK(m1.g(0, 0).real() == doctest::Approx(16.0 / 9).epsilon(1e-12));
  CHECK(m1.g(1, 1).real() == doctest::Approx(4.0 / 3).epsilon(1e-12));
  CHECK(std::abs(m1.g(0, 1)) < 1e-14);
  CHECK(m1.det_g == doctest::Approx(64.0 / 27).epsilon(1e-12));

  MetricData mg = metric_at(ball, {0.3, -0.2, 0.1, 0.4});
  CHECK((mg.g * mg.ginv - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-10);

  CHECK_THROWS_AS(metric_at(ball, {1.5, 0, 0, 0}), SpectrumError);
  CHECK_THROWS_AS(metric_at(ball, {0, 0}), SpectrumError);
}

TEST_CASE("metric determinant matches the ambient operator on the corpus") {
  for (const DomainSpec& dom : corpus()) {
    double worst = 0;
    for (const auto& p : interior_points(dom, 100, 11)) {
      WirtingerData w = wirtinger(jet_eval(dom.ast, p, 2));
      REQUIRE(w.r < 0);
      MetricData md = metric_at(dom, p);
      double want = J_bordered(w) / std::pow(-w.r, dom.n + 1);
      worst = std::max(worst, std::abs(md.det_g - want) / std::abs(want));
    }
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("the ball metric is Einstein with the model constant") {
  DomainSpec ball = builtin("ball");

  Eigen::MatrixXcd r0 = ricci_at(ball, {0, 0, 0, 0});
  CHECK((r0 + 3.0 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-12);

  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    Rng rng(7, i);
    std::vector<double> p = halton_sphere(i + 1, 4);
    double rad = 0.95 * std::pow(rng.uniform(), 0.25);
    for (double& c : p) c *= rad;
    worst = std::max(worst, einstein_deficit(ball, p));
  }
  CHECK(worst < 1e-12);

  // n = 1 and n = 3 round out the dimension sweep
  DomainSpec disc = builtin("ball", {{"n", 1}});
  Eigen::MatrixXcd r1 = ricci_at(disc, {0.4, -0.3});
  MetricData g1 = metric_at(disc, {0.4, -0.3});
  CHECK((r1(0, 0) / g1.g(0, 0)).real() == doctest::Approx(-2.0).epsilon(1e-12));
  DomainSpec b3 = builtin("ball", {{"n", 3}});
  CHECK(einstein_deficit(b3, {0.2, 0.1, -0.3, 0.1, 0.2, -0.1}) < 1e-12);

  CHECK_THROWS_AS(ricci_at(ball, {1.5, 0, 0, 0}), SpectrumError);
}

TEST_CASE("ellipsoid reports a genuine Einstein deficit") {
  DomainSpec ell = builtin("ellipsoid");
  double d0 = einstein_deficit(ell, {0, 0, 0, 0});
  CHECK(d0 == doctest::Approx(0.092450).epsilon(1e-4));
  double e0 = super_einstein_min_eig(ell, {0, 0, 0, 0});
  CHECK(e0 == doctest::Approx(-1.0 / 6).epsilon(1e-6));
  CHECK(einstein_deficit(ell, {0.3, 0.1, -0.2, 0.1}) ==
        doctest::Approx(0.039599).epsilon(1e-4));
}

TEST_CASE("Laplace-Beltrami action on plain functions") {
  DomainSpec ball = builtin("ball");
  ExprPtr one = parse("1", 2);
  ExprPtr f = parse("abs2(z1)", 2);
  ExprPtr h = parse("x1*y2 + abs2(z2)", 2);

  CHECK(std::abs(laplacian(ball, one, {0.2, 0.1, 0, -0.3})) < 1e-14);
  CHECK(laplacian(ball, f, {0, 0, 0, 0}) ==
        doctest::Approx(-4.0).epsilon(1e-12));

  std::vector<double> p{0.3, -0.1, 0.2, 0.1};
  ExprPtr combo = parse("2*abs2(z1) + 3*(x1*y2 + abs2(z2))", 2);
  CHECK(laplacian(ball, combo, p) ==
        doctest::Approx(2 * laplacian(ball, f, p) + 3 * laplacian(ball, h, p))
            .epsilon(1e-12));
}

TEST_CASE("Rayleigh quotients reproduce the radial quadrature oracle") {
  std::vector<RayleighPoint> r = rayleigh_scan(2, {1.05, 2.0}, 1e-5, 32);
  CHECK(r[0].quotient == doctest::Approx(4.47487100).epsilon(1e-7));
  CHECK(r[1].quotient == doctest::Approx(8.00016002).epsilon(1e-7));
  CHECK(r[0].errbar < 1e-9);
  CHECK(r[1].errbar < 1e-9);

  CHECK(rayleigh_scan(2, {2.0}, 1e-4, 32)[0].quotient ==
        doctest::Approx(8.00160191).epsilon(1e-7));
  CHECK(rayleigh_scan(2, {2.0}, 1e-3, 32)[0].quotient ==
        doctest::Approx(8.01613610).epsilon(1e-7));

  // the cutoff bite decays linearly with its depth
  double b3 = rayleigh_scan(2, {2.0}, 1e-3, 32)[0].quotient - 8.0;
  double b5 = rayleigh_scan(2, {2.0}, 1e-5, 32)[0].quotient - 8.0;
  CHECK(b3 / b5 > 90.0);
  CHECK(b3 / b5 < 110.0);

  CHECK_THROWS_AS(rayleigh_scan(2, {1.0}, 1e-5, 32), SpectrumError);
  CHECK_THROWS_AS(rayleigh_scan(2, {0.9}, 1e-5, 32), SpectrumError);
  CHECK_THROWS_AS(rayleigh_scan(2, {2.0}, 0.2, 32), SpectrumError);
  CHECK_THROWS_AS(rayleigh_scan(2, {2.0}, 1e-5, 2), SpectrumError);
  CHECK_THROWS_AS(rayleigh_scan(0, {2.0}, 1e-5, 32), SpectrumError);
}

TEST_CASE("the quotient grid bounds the bottom eigenvalue from above") {
  std::vector<double> grid = default_s_grid();
  REQUIRE(grid.size() == 40);
  CHECK(grid.front() == 1.05);
  CHECK(grid.back() == 3.0);

  std::vector<RayleighPoint> rows = rayleigh_scan(2, grid, 1e-5, 32);
  double qmin = 1e300;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].quotient >= 4.0 - 1e-3);
    if (i) CHECK(rows[i].quotient > rows[i - 1].quotient);
    qmin = std::min(qmin, rows[i].quotient);
  }
  CHECK(qmin == doctest::Approx(4.47487100).epsilon(1e-7));
  CHECK(qmin <= 4.6);
  CHECK(rows.back().quotient == doctest::Approx(12.00008).epsilon(1e-6));
}

TEST_CASE("Monte Carlo cross-check of the radial reduction") {
  McEstimate mc = rayleigh_mc(2, 2.0, 1e-5, 1000000, 42);
  CHECK(std::abs(mc.quotient - 8.00016002) < 3.0 * mc.se);
  CHECK(mc.se > 1e-4);
  CHECK(mc.se < 0.05);
  CHECK(mc.samples == 1000000);

  McEstimate mc4 = rayleigh_mc(2, 2.0, 1e-5, 1000000, 42, 4);
  CHECK(mc.quotient == mc4.quotient);
  CHECK(mc.se == mc4.se);

  CHECK_THROWS_AS(rayleigh_mc(2, 0.9, 1e-5, 100, 1), SpectrumError);
  CHECK_THROWS_AS(rayleigh_mc(2, 2.0, 1e-5, 1, 1), SpectrumError);
}

TEST_CASE("spectrum csv carries the three columns") {
  std::vector<RayleighPoint> rows = rayleigh_scan(2, {1.05, 2.0}, 1e-5, 32);
  std::ostringstream os;
  write_spectrum_csv(rows, os);
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "# schema: superpsc.rayleigh-scan.v1");
  std::getline(is, header);
  CHECK(header == "s,quotient,stderr");
  int count = 0;
  std::string line;
  double s0 = -1, q0 = -1, e0 = -1;
  while (std::getline(is, line)) {
    if (count == 0) REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &s0, &q0, &e0) == 3);
    ++count;
  }
  CHECK(count == 2);
  CHECK(s0 == 1.05);
  CHECK(q0 == rows[0].quotient);
}
