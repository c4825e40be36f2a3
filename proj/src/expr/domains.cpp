#include <cmath>
#include <cstdio>
#include <set>

#include "expr/ast.hpp"

namespace spc {
namespace {

double get(const std::map<std::string, double>& params, const std::string& key,
           double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::map<std::string, double>& params,
                const std::set<std::string>& allowed) {
  for (const auto& [k, v] : params) {
    (void)v;
    if (!allowed.count(k))
      throw ExprError("unknown parameter '" + k + "' for this domain");
  }
}

int get_n(const std::map<std::string, double>& params, int fallback) {
  double nd = get(params, "n", fallback);
  int n = static_cast<int>(nd);
  if (nd != n || n < 1 || n > 8)
    throw ExprError("dimension n must be an integer in [1, 8]");
  return n;
}

ExprPtr sq(ExprPtr e) { return Expr::pow(std::move(e), 2); }

ExprPtr add(ExprPtr a, ExprPtr b) {
  return Expr::binary(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  return Expr::binary(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  return Expr::binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr abs2z(int j, int n) {
  return add(sq(Expr::variable(j, false, n)), sq(Expr::variable(j, true, n)));
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DomainSpec builtin(const std::string& name,
                   const std::map<std::string, double>& parameters) {
  DomainSpec spec;
  spec.name = name;

  if (name == "ball") {
    check_keys(parameters, {"n"});
    int n = get_n(parameters, 2);
    ExprPtr e = abs2z(1, n);
    for (int j = 2; j <= n; ++j) e = add(e, abs2z(j, n));
    spec.n = n;
    spec.ast = sub(e, Expr::constant(1.0));
    spec.parameters = {{"n", double(n)}};
    spec.interior_point.assign(2 * n, 0.0);
    return spec;
  }

  if (name == "ellipsoid") {
    std::set<std::string> allowed = {"n"};
    for (int j = 1; j <= 8; ++j) {
      allowed.insert("a" + std::to_string(j));
      allowed.insert("b" + std::to_string(j));
    }
    check_keys(parameters, allowed);
    int n = get_n(parameters, 2);
    // real ellipsoid: sum_j a_j x_j^2 + b_j y_j^2 - 1; defaults a=(2,1,..,1)
    ExprPtr e;
    spec.parameters["n"] = n;
    for (int j = 1; j <= n; ++j) {
      double aj = get(parameters, "a" + std::to_string(j), j == 1 ? 2.0 : 1.0);
      double bj = get(parameters, "b" + std::to_string(j), 1.0);
      if (!(aj > 0.0) || !(bj > 0.0))
        throw ExprError("ellipsoid semi-axis coefficients must be > 0");
      spec.parameters["a" + std::to_string(j)] = aj;
      spec.parameters["b" + std::to_string(j)] = bj;
      ExprPtr tj = add(mul(Expr::constant(aj), sq(Expr::variable(j, false, n))),
                       mul(Expr::constant(bj), sq(Expr::variable(j, true, n))));
      e = e ? add(e, tj) : tj;
    }
    spec.n = n;
    spec.ast = sub(e, Expr::constant(1.0));
    spec.interior_point.assign(2 * n, 0.0);
    return spec;
  }

  if (name == "example51") {
    check_keys(parameters, {"delta"});
    double delta = get(parameters, "delta", 5.9604644775390625e-8);  // 4^-12
    if (!(delta > 0.0)) throw ExprError("delta must be > 0");
    spec.n = 2;
    spec.ast = parse(
        "-2*x2 + abs2(z1) + abs2(z2) - 8*abs2(z1)^2*bump(abs2(z1)," +
            fmt(delta) + ")",
        2);
    spec.parameters = {{"delta", delta}};
    spec.interior_point = {0.0, 0.5, 0.0, 0.0};
    return spec;
  }

  if (name == "example52") {
    check_keys(parameters, {"n", "alpha", "C"});
    int n = get_n(parameters, 2);
    double alpha = get(parameters, "alpha", 1.05);
    if (!(alpha >= 1.0) || !(alpha < 9.0 / 8.0))
      throw ExprError("alpha must lie in [1, 9/8)");
    double cmax = (9.0 - 8.0 * alpha) * (1.0 + alpha) / 256.0;
    double C = get(parameters, "C", cmax);
    if (!(C > 0.0) || C > cmax)
      throw ExprError("C must lie in (0, (9-8*alpha)*(1+alpha)/256]");
    // |z|^2 + 2 x_n + alpha * sum_j (x_j^2 - y_j^2) + C * sum_j |z_j|^4
    ExprPtr e = abs2z(1, n);
    for (int j = 2; j <= n; ++j) e = add(e, abs2z(j, n));
    e = add(e, mul(Expr::constant(2.0), Expr::variable(n, false, n)));
    for (int j = 1; j <= n; ++j)
      e = add(e, mul(Expr::constant(alpha),
                     sub(sq(Expr::variable(j, false, n)),
                         sq(Expr::variable(j, true, n)))));
    for (int j = 1; j <= n; ++j)
      e = add(e, mul(Expr::constant(C), sq(abs2z(j, n))));
    spec.n = n;
    spec.ast = e;
    spec.parameters = {{"n", double(n)}, {"alpha", alpha}, {"C", C}};
    spec.interior_point.assign(2 * n, 0.0);
    spec.interior_point[n - 1] = -0.5;  // x_n
    return spec;
  }

  if (name == "disc_perturbed") {
    check_keys(parameters, {"beta"});
    double beta = get(parameters, "beta", 0.22);
    // |z1|^2 - 1 + beta * Re z1^4; harmonic quartic keeps the Levi form flat
    // while denting the boundary inward (non-convex for beta large enough);
    // bounded for beta < 1/4
    if (!(beta >= 0.0) || !(beta < 0.25))
      throw ExprError("beta must lie in [0, 1/4)");
    spec.n = 1;
    std::string b = fmt(beta);
    spec.ast = parse(
        "abs2(z1) - 1 + " + b + "*(x1^4 - 6*x1^2*y1^2 + y1^4)", 1);
    spec.parameters = {{"beta", beta}};
    spec.interior_point = {0.0, 0.0};
    return spec;
  }

  throw ExprError("unknown builtin domain '" + name + "'");
}

}  // namespace spc
