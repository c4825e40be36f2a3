#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "approx/defect.hpp"
#include "jets/jet_eval.hpp"
#include "ma/fefferman.hpp"
#include "test_support.hpp"

using namespace spc;
using spc::testing::corpus;
using spc::testing::interior_points;

namespace {

const std::vector<double> kDepths = {1e-1, 3.1622776601683794e-2, 1e-2,
                                     3.1622776601683794e-3, 1e-3};

}  // namespace

TEST_CASE("two determinant forms of J agree on worked points") {
  DomainSpec ball = builtin("ball", {});
  WirtingerData w = wirtinger(jet_eval(ball.ast, {0.5, 0, 0, 0}, 2));
  RaisedData rd = raise(w);
  CHECK(J_bordered(w) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(J_product(w, rd) == doctest::Approx(1.0).epsilon(1e-14));

  // doubling the defining function scales J by 2^{n+1}
  ExprPtr scaled = parse("2*abs2(z1) + 2*abs2(z2) - 2", 2);
  WirtingerData ws = wirtinger(jet_eval(scaled, {0.5, 0, 0, 0}, 2));
  RaisedData rds = raise(ws);
  CHECK(J_bordered(ws) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(J_product(ws, rds) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("two determinant forms of J agree across the corpus") {
  for (const auto& dom : corpus()) {
    for (const auto& z : interior_points(dom, 100, 51)) {
      WirtingerData w = wirtinger(jet_eval(dom.ast, z, 2));
      RaisedData rd = raise(w);
      double jb = J_bordered(w);
      double jp = J_product(w, rd);
      CHECK(std::abs(jb - jp) <= 1e-10 * std::max(1.0, std::abs(jp)));
      CHECK(jp > 0.0);
    }
  }
}

TEST_CASE("jet assembly of J matches the point evaluation") {
  for (const auto& dom : corpus()) {
    SampleResult sr = sample_boundary(dom, 25, 77);
    auto pts = interior_points(dom, 25, 78);
    for (const auto& s : sr.samples) pts.push_back(s.point);
    for (const auto& z : pts) {
      Taylor<double> rj = jet_eval(dom.ast, z, 4);
      WirtingerData w = wirtinger(rj);
      cplx jv = J_jet(rj).value();
      CHECK(std::abs(jv.imag()) < 1e-12);
      CHECK(std::abs(jv.real() - J_bordered(w)) <=
            1e-12 * std::max(1.0, std::abs(jv.real())));
    }
  }
}

TEST_CASE("level-set identity for the log defining function") {
  DomainSpec ball = builtin("ball", {});
  WirtingerData w = wirtinger(jet_eval(ball.ast, {0.5, 0, 0, 0}, 2));
  RaisedData rd = raise(w);
  // det H(l) at this point is (4/3)^3 = J * (-r)^{-(n+1)}
  Eigen::MatrixXcd hl =
      w.hess / 0.75 + (w.grad * w.grad.adjoint()) / (0.75 * 0.75);
  CHECK(hl.determinant().real() ==
        doctest::Approx(64.0 / 27.0).epsilon(1e-13));
  CHECK(log_level_identity_check(w, rd) < 1e-14);

  for (const auto& dom : corpus()) {
    for (const auto& z : interior_points(dom, 60, 52)) {
      WirtingerData wz = wirtinger(jet_eval(dom.ast, z, 2));
      RaisedData rz = raise(wz);
      CHECK(log_level_identity_check(wz, rz) < 1e-8);
    }
  }

  CHECK_THROWS_AS(
      log_level_identity_check(
          wirtinger(jet_eval(ball.ast, {1.5, 0, 0, 0}, 2)),
          raise(wirtinger(jet_eval(ball.ast, {1.5, 0, 0, 0}, 2)))),
      CalcError);
}

TEST_CASE("plurisubharmonic shift: selection and consistency") {
  DomainSpec ball = builtin("ball", {});
  Taylor<double> bj = jet_eval(ball.ast, {0.5, 0, 0, 0}, 4);
  CHECK(auto_shift(bj) == 0.0);
  CHECK(shift_consistency(bj, 1.0) < 1e-12);

  // interior ball points, shift a = 1 keeps 1 + a r positive
  for (const auto& z : interior_points(ball, 60, 53)) {
    Taylor<double> rj = jet_eval(ball.ast, z, 4);
    CHECK(shift_consistency(rj, 1.0) < 1e-8);
    CHECK(shift_consistency(rj, auto_shift(rj)) < 1e-12);
  }

  // a defining function that is not plurisubharmonic at the test point
  ExprPtr bumpy = parse("abs2(z1) - 3*x1^2 + abs2(z2) - 0.2", 2);
  Taylor<double> tj = jet_eval(bumpy, {0.3, 0, 0, 0}, 4);
  double a = auto_shift(tj);
  CHECK(a == 1.0);
  WirtingerData ws = wirtinger(psh_shift(tj, a));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ws.hess);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(shift_consistency(tj, a) < 1e-10);
  CHECK(shift_consistency(tj, 2.0 * a) < 1e-10);

  // vanishing gradient leaves nothing for the shift to fix
  ExprPtr hopeless = parse("abs2(z1) - 3*x1^2 + abs2(z2) - 0.2", 2);
  CHECK_THROWS_AS(auto_shift(jet_eval(hopeless, {0, 0, 0, 0}, 4)), CalcError);
}

TEST_CASE("log J derivatives vanish for the ball") {
  DomainSpec ball = builtin("ball", {});
  for (const std::vector<double> z :
       {std::vector<double>{0.5, 0, 0, 0}, std::vector<double>{1, 0, 0, 0},
        std::vector<double>{0.2, -0.4, 0.1, 0.3}}) {
    Taylor<double> rj = jet_eval(ball.ast, z, 4);
    WirtingerData w = wirtinger(rj);
    RaisedData rd = raise(w);
    LogJDerivs d = logJ_derivatives(w, rd, rj);
    CHECK(d.gradient.norm() < 1e-12);
    CHECK(d.hessian.norm() < 1e-12);
  }
}

TEST_CASE("closed-form gradient of log J matches the jet readout") {
  for (const auto& dom : corpus()) {
    SampleResult sr = sample_boundary(dom, 20, 81);
    auto pts = interior_points(dom, 20, 82);
    for (const auto& s : sr.samples) pts.push_back(s.point);
    for (const auto& z : pts) {
      Taylor<double> rj = jet_eval(dom.ast, z, 4);
      WirtingerData w = wirtinger(rj);
      RaisedData rd = raise(w);
      LogJDerivs d = logJ_derivatives(w, rd, rj);
      Taylor<cplx> lj = log(J_jet(jet_eval(dom.ast, z, 6)));
      for (int k = 0; k < dom.n; ++k) {
        cplx jet_grad = wirt_value(lj, {k}, {});
        CHECK(std::abs(jet_grad - d.gradient(k)) <
              1e-9 * std::max(1.0, std::abs(jet_grad)));
      }
    }
  }
}

TEST_CASE("radial derivative of log J on the boundary") {
  for (const auto& dom : corpus()) {
    SampleResult sr = sample_boundary(dom, 50, 83);
    for (const auto& s : sr.samples) {
      Taylor<double> rj = jet_eval(dom.ast, s.point, 4);
      WirtingerData w = wirtinger(rj);
      RaisedData rd = raise(w);
      LogJDerivs d = logJ_derivatives(w, rd, rj);
      cplx lhs = R_op(rd, d.gradient);
      cplx rhs = 0;
      for (int k = 0; k < dom.n; ++k) {
        cplx lap_rk = 0;
        for (int i = 0; i < dom.n; ++i)
          for (int j = 0; j < dom.n; ++j)
            lap_rk += rd.atilde(i, j) * w.third(i, j, k);
        rhs += rd.rup(k) * lap_rk;
      }
      cplx quad = 0;
      for (int i = 0; i < dom.n; ++i)
        for (int k = 0; k < dom.n; ++k)
          quad += rd.rup(i) * rd.rup(k) * w.hess_hol(i, k);
      rhs += quad / rd.grad_norm_sq;
      CHECK(std::abs(lhs - rhs) < 1e-7 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("B vanishes for the ball and factors through -r elsewhere") {
  DomainSpec ball = builtin("ball", {});
  FeffermanPointData fp = fefferman_point(jet_eval(ball.ast, {0.3, 0.2, -0.1, 0.4}, 4));
  CHECK(std::abs(fp.B0) < 1e-12);
  CHECK(std::abs(fp.B) < 1e-12);
  CHECK(fp.rho1 == doctest::Approx(fp.r).epsilon(1e-12));

  // trace form agrees with the product form at interior points
  DomainSpec ell = builtin("ellipsoid", {});
  SampleResult sr = sample_boundary(ell, 30, 84);
  for (const auto& s : sr.samples) {
    for (double t : {0.01, 0.05}) {
      std::vector<double> z(s.point);
      for (int k = 0; k < 4; ++k) z[k] += t * s.inward_normal[k];
      Taylor<double> rj = jet_eval(ell.ast, z, 4);
      WirtingerData w = wirtinger(rj);
      RaisedData rd = raise(w);
      LogJDerivs d = logJ_derivatives(w, rd, rj);
      auto [b, b0] = B_and_B0(rd, d);
      double bt = B_trace_form(w, rd, d.hessian);
      CHECK(std::abs(bt - b) <= 1e-9 * std::max(1.0, std::abs(b)));
      CHECK(b == doctest::Approx((-rd.r) * b0).epsilon(1e-15));
    }
  }
}

TEST_CASE("boundary anchor values of the bump domain") {
  DomainSpec dom = builtin("example51", {});
  std::vector<double> origin = {0, 0, 0, 0};
  Taylor<double> rj = jet_eval(dom.ast, origin, 4);
  FeffermanPointData fp = fefferman_point(rj);
  CHECK(std::abs(fp.r) < 1e-15);
  CHECK(fp.J == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fp.detH == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fp.logJ_gradient.norm() < 1e-10);
  // B0(0) = -8/(3e)
  CHECK(fp.B0 == doctest::Approx(-8.0 / (3.0 * std::exp(1.0))).epsilon(1e-7));
  CHECK(fp.rho1 == 0.0);
  CHECK(std::isnan(fp.ell));

  // J applied to rho1 returns exactly 1 at this point
  Taylor<double> rj6 = jet_eval(dom.ast, origin, 6);
  CHECK(J_of_rho(rj6, true) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("negative J is rejected with a diagnostic") {
  ExprPtr bad = parse("abs2(z1) - 3*x2^2 + abs2(z2) - 0.2", 2);
  Taylor<double> rj = jet_eval(bad, {0.3, 0, 0, 0}, 4);
  CHECK_THROWS_AS(fefferman_point(rj), CalcError);
}

TEST_CASE("defect scan is exact on domains with constant J") {
  DomainSpec ball = builtin("ball", {});
  SampleResult sr = sample_boundary(ball, 6, 85);
  for (const auto& s : sr.samples) {
    DefectScan ds = defect_scan(ball, s, kDepths, true);
    CHECK(ds.exact);
    CHECK(std::isnan(ds.slope));
    for (double d : ds.defects) CHECK(d < 1e-13);
  }

  // unbounded Hermitian quadric: J is constant there as well
  DomainSpec sieg;
  sieg.name = "quadric";
  sieg.n = 2;
  sieg.ast = parse("2*x2 + abs2(z1) + abs2(z2)", 2);
  sieg.interior_point = {0.0, -0.5, 0.0, 0.0};
  auto hit = cross_ray(sieg, {0.0, 1.0, 0.0, 0.0});
  REQUIRE(hit.has_value());
  DefectScan ds = defect_scan(sieg, *hit, kDepths, true);
  CHECK(ds.exact);
}

TEST_CASE("defect decay orders on the stock ellipsoid") {
  DomainSpec ell = builtin("ellipsoid", {});
  // skip the axis block: on symmetry axes the first-order coefficient of the
  // rho0 defect vanishes and both scans super-converge (see the axis case
  // below); the generic decay orders live on generic rays
  SampleResult sr = sample_boundary(ell, 11, 86);
  REQUIRE(sr.samples.size() == 11);
  for (std::size_t i = 8; i < sr.samples.size(); ++i) {
    const auto& s = sr.samples[i];
    DefectScan with_b = defect_scan(ell, s, kDepths, true);
    DefectScan no_b = defect_scan(ell, s, kDepths, false);
    REQUIRE(!with_b.exact);
    REQUIRE(!no_b.exact);
    // quadratic decay with the B factor, linear without, gap at least 0.8
    CHECK(with_b.slope >= 1.9);
    CHECK(no_b.slope >= 0.9);
    CHECK(no_b.slope < 1.9);
    CHECK(with_b.slope - no_b.slope >= 0.8);
  }

  // on the long symmetry axis both defects decay cubically; pin that so a
  // change in behavior gets noticed
  const auto& axis = sr.samples[0];
  CHECK(axis.point[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  DefectScan ax1 = defect_scan(ell, axis, kDepths, true);
  DefectScan ax0 = defect_scan(ell, axis, kDepths, false);
  CHECK(ax1.slope > 2.5);
  CHECK(ax0.slope > 2.5);
}

TEST_CASE("affine transport factors") {
  AffineMap m;
  m.A = 2.0 * Eigen::MatrixXcd::Identity(2, 2);
  m.b = Eigen::VectorXcd::Zero(2);
  CHECK(transport_factor(m) ==
        doctest::Approx(std::pow(4.0, -2.0 / 3.0)).epsilon(1e-15));
  CHECK(det_hessian_factor(m) ==
        doctest::Approx(std::pow(4.0, 2.0 / 3.0)).epsilon(1e-15));
  CHECK(transport_factor(m) * det_hessian_factor(m) ==
        doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> img = apply_affine(m, {0.1, 0.2, 0.3, 0.4});
  CHECK(img == std::vector<double>{0.2, 0.4, 0.6, 0.8});

  // the transported function of the doubled ball is a genuine defining
  // function for the half ball, and its Hessian determinant obeys the rule
  DomainSpec ball = builtin("ball", {});
  double c = transport_factor(m);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.17g*(4*abs2(z1) + 4*abs2(z2) - 1)", c);
  ExprPtr pre = parse(buf, 2);
  std::vector<double> z0 = {0.1, 0.2, 0.05, -0.1};
  std::vector<double> z1 = apply_affine(m, z0);
  double rho_pre = eval<double>(pre, z0);
  double rho_post = eval<double>(ball.ast, z1);
  CHECK(rho_pre == doctest::Approx(rho_post * c).epsilon(1e-14));
  double dh_pre =
      wirtinger(jet_eval(pre, z0, 2)).hess.determinant().real();
  double dh_post =
      wirtinger(jet_eval(ball.ast, z1, 2)).hess.determinant().real();
  CHECK(dh_pre ==
        doctest::Approx(det_hessian_factor(m) * dh_post).epsilon(1e-13));

  AffineMap sing;
  sing.A = Eigen::MatrixXcd::Zero(2, 2);
  sing.b = Eigen::VectorXcd::Zero(2);
  CHECK_THROWS_AS(transport_factor(sing), CalcError);
  AffineMap mismatched;
  mismatched.A = Eigen::MatrixXcd::Identity(2, 2);
  mismatched.b = Eigen::VectorXcd::Zero(3);
  CHECK_THROWS_AS(check_biholomorphic(mismatched), CalcError);
}
