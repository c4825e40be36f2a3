#include "jets/jet_eval.hpp"

namespace spc {
namespace {

// jet of g(t) = exp(-delta/(delta-t)) at t0 < delta, as a univariate series
std::vector<double> bump_series(double t0, double delta, int order) {
  const JetSpace& one = JetSpace::get(1, order);
  Taylor<double> w = Taylor<double>::constant(one, delta - t0);
  std::vector<std::uint8_t> e1{1};
  w[one.position(e1.data())] = -1.0;  // w(s) = delta - t0 - s
  Taylor<double> g = exp(w.reciprocal() * (-delta));
  std::vector<double> c(order + 1);
  for (int k = 0; k <= order; ++k) c[k] = g[k];  // 1-d positions are degrees
  return c;
}

Taylor<double> eval_rec(const Expr& e, const double* point,
                        const JetSpace& sp) {
  switch (e.kind) {
    case Expr::Kind::Constant:
      return Taylor<double>::constant(sp, e.value);
    case Expr::Kind::Var:
      return Taylor<double>::variable(sp, e.var, point[e.var]);
    case Expr::Kind::Add:
      return eval_rec(*e.a, point, sp) + eval_rec(*e.b, point, sp);
    case Expr::Kind::Sub:
      return eval_rec(*e.a, point, sp) - eval_rec(*e.b, point, sp);
    case Expr::Kind::Mul:
      return eval_rec(*e.a, point, sp).mul(eval_rec(*e.b, point, sp));
    case Expr::Kind::Div: {
      Taylor<double> num = eval_rec(*e.a, point, sp);
      Taylor<double> den = eval_rec(*e.b, point, sp);
      if (den.value() == 0.0)
        throw ExprError("division by zero at position " +
                        std::to_string(e.srcpos));
      return num.mul(den.reciprocal());
    }
    case Expr::Kind::Pow:
      return eval_rec(*e.a, point, sp).pow_int(e.exponent);
    case Expr::Kind::Bump: {
      Taylor<double> t = eval_rec(*e.a, point, sp);
      if (!(t.value() < e.delta)) return Taylor<double>(sp);  // flat side
      return t.compose_series(bump_series(t.value(), e.delta, sp.order()));
    }
  }
  throw ExprError("corrupt expression node");
}

}  // namespace

Taylor<double> jet_eval(const ExprPtr& ast, const std::vector<double>& point,
                        int order) {
  const JetSpace& sp = JetSpace::get(int(point.size()), order);
  return eval_rec(*ast, point.data(), sp);
}

}  // namespace spc
