#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "expr/ast.hpp"
#include "support/rng.hpp"

using namespace spc;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ExprError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse and eval basics") {
  ExprPtr ball = parse("abs2(z1)+abs2(z2)-1", 2);
  CHECK(eval<double>(ball, {0.5, 0.0, 0.0, 0.0}) == -0.75);
  CHECK(eval<double>(ball, {0.0, 0.0, 0.0, 0.0}) == -1.0);

  ExprPtr poly = parse("2*x1^3 - y2/ (1+x2^2)", 2);
  double x1 = 0.3, x2 = -0.7, y2 = 0.11;
  CHECK(eval<double>(poly, {x1, x2, 0.0, y2}) ==
        doctest::Approx(2 * x1 * x1 * x1 - y2 / (1 + x2 * x2)).epsilon(1e-15));

  // leading negative constants are accepted
  CHECK(eval<double>(parse("-2*x2+1", 2), {0.0, 0.25, 0.0, 0.0}) == 0.5);
}

TEST_CASE("bump evaluation") {
  double delta = 5.9604644775390625e-8;  // 4^-12
  ExprPtr g = parse("bump(x1, 5.9604644775390625e-8)", 1);
  CHECK(eval<double>(g, {0.0, 0.0}) == std::exp(-1.0));
  CHECK(eval<double>(g, {delta, 0.0}) == 0.0);
  CHECK(eval<double>(g, {2 * delta, 0.0}) == 0.0);

  ExprPtr g2 = parse("bump(abs2(z1), 5.9604644775390625e-8)", 1);
  CHECK(eval<double>(g2, {0.0, 0.0}) == std::exp(-1.0));
}

TEST_CASE("parse errors carry positions") {
  CHECK(error_of([] { parse("abs2(z3)", 2); }).find("out of range") !=
        std::string::npos);
  CHECK(error_of([] { parse("x1 + ", 2); }).find("position") !=
        std::string::npos);
  CHECK(error_of([] { parse("x1^2.5", 2); }).find("non-integer exponent") !=
        std::string::npos);
  CHECK(error_of([] { parse("x0", 2); }).find("out of range") !=
        std::string::npos);
  CHECK(error_of([] { parse("bump(x1, -1)", 1); }).find("delta") !=
        std::string::npos);
  CHECK(error_of([] { parse("x1 x2", 2); }).find("trailing") !=
        std::string::npos);
}

TEST_CASE("division by zero reports a position") {
  ExprPtr e = parse("1/(x1-x1)", 1);
  CHECK(error_of([&] {
          eval<double>(e, {0.3, 0.0});
        }).find("division by zero") != std::string::npos);
}

TEST_CASE("pretty-print round trip") {
  std::vector<DomainSpec> corpus = {
      builtin("ball"), builtin("ellipsoid"), builtin("example51"),
      builtin("example52"), builtin("disc_perturbed")};
  for (const auto& d : corpus) {
    std::string printed = pretty_print(d.ast);
    ExprPtr again = parse(printed, d.n);
    Rng rng(17, std::hash<std::string>{}(d.name));
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> p(2 * d.n);
      for (auto& c : p) c = rng.uniform(-0.9, 0.9);
      double a = eval<double>(d.ast, p);
      double b = eval<double>(again, p);
      CHECK(std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("builtin corpus") {
  for (const char* name :
       {"ball", "ellipsoid", "example51", "example52", "disc_perturbed"}) {
    DomainSpec d = builtin(name);
    CHECK(int(d.interior_point.size()) == 2 * d.n);
    CHECK(eval<double>(d.ast, d.interior_point) < 0.0);
  }

  DomainSpec e52 = builtin("example52");
  CHECK(e52.parameters.at("alpha") == 1.05);
  CHECK(e52.parameters.at("C") ==
        doctest::Approx(123.0 / 25600.0).epsilon(1e-14));
  CHECK(eval<double>(e52.ast, e52.interior_point) ==
        doctest::Approx(-0.75 + 0.25 * 1.05 + e52.parameters.at("C") * 0.0625)
            .epsilon(1e-15));

  DomainSpec e51 = builtin("example51");
  CHECK(eval<double>(e51.ast, e51.interior_point) == -0.75);

  DomainSpec ell = builtin("ellipsoid");
  CHECK(ell.parameters.at("a1") == 2.0);
  CHECK(ell.parameters.at("b2") == 1.0);
  CHECK(eval<double>(ell.ast, {0.5, 0.0, 0.0, 0.0}) == -0.5);

  CHECK_THROWS_AS(builtin("torus"), ExprError);
  CHECK_THROWS_AS(builtin("example52", {{"alpha", 2.0}}), ExprError);
  CHECK_THROWS_AS(builtin("example52", {{"C", 1.0}}), ExprError);
  CHECK_THROWS_AS(builtin("ball", {{"waist", 1.0}}), ExprError);
  CHECK_THROWS_AS(builtin("ball", {{"n", 9.0}}), ExprError);
}

TEST_CASE("interior points sit inside and parameters flow through") {
  DomainSpec d = builtin("example52", {{"alpha", 1.1}});
  CHECK(d.parameters.at("C") ==
        doctest::Approx((9.0 - 8.8) * 2.1 / 256.0).epsilon(1e-14));
  CHECK(eval<double>(d.ast, d.interior_point) < 0.0);

  DomainSpec ell = builtin("ellipsoid", {{"a1", 4.0}, {"b1", 9.0}});
  CHECK(eval<double>(ell.ast, {0.5, 0.0, 0.0, 0.0}) == 0.0);
}
