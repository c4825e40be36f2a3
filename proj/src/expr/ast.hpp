#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spc {

struct ExprError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression tree over the real coordinates of C^n, stored x-block then
// y-block: x_j -> index j-1, y_j -> index n+j-1 (j is 1-based).
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Constant, Var, Add, Sub, Mul, Div, Pow, Bump };

  Kind kind;
  double value = 0.0;  // Constant
  int var = -1;        // Var: flat real-coordinate index in [0, 2n)
  int j = 0;           // Var: 1-based complex coordinate, for printing
  bool is_y = false;   // Var: imaginary-part axis
  int exponent = 0;    // Pow, >= 1
  double delta = 0.0;  // Bump cutoff, > 0
  ExprPtr a, b;
  int srcpos = -1;  // offset in the source string, -1 when built in code

  static ExprPtr constant(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Constant;
    e->value = v;
    return e;
  }
  static ExprPtr variable(int j, bool is_y, int n) {
    if (j < 1 || j > n)
      throw ExprError("coordinate index " + std::to_string(j) +
                      " out of range for n=" + std::to_string(n));
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Var;
    e->j = j;
    e->is_y = is_y;
    e->var = (is_y ? n : 0) + j - 1;
    return e;
  }
  static ExprPtr binary(Kind k, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
  }
  static ExprPtr pow(ExprPtr base, int exponent) {
    if (exponent < 1) throw ExprError("pow exponent must be >= 1");
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Pow;
    e->a = std::move(base);
    e->exponent = exponent;
    return e;
  }
  static ExprPtr bump(ExprPtr child, double delta) {
    if (!(delta > 0.0)) throw ExprError("bump delta must be > 0");
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Bump;
    e->a = std::move(child);
    e->delta = delta;
    return e;
  }
};

// name + dimension + defining expression; D = { r < 0 }
struct DomainSpec {
  std::string name;
  int n = 0;  // complex dimension; real dimension is 2n
  ExprPtr ast;
  std::map<std::string, double> parameters;
  std::vector<double> interior_point;  // size 2n, r < 0 there
};

ExprPtr parse(const std::string& source, int n);
std::string pretty_print(const Expr& e);
inline std::string pretty_print(const ExprPtr& e) { return pretty_print(*e); }

DomainSpec builtin(const std::string& name,
                   const std::map<std::string, double>& parameters = {});

// Evaluation is pure; Real is double or long double.
template <class Real>
Real eval_at(const Expr& e, const Real* point) {
  switch (e.kind) {
    case Expr::Kind::Constant:
      return Real(e.value);
    case Expr::Kind::Var:
      return point[e.var];
    case Expr::Kind::Add:
      return eval_at(*e.a, point) + eval_at(*e.b, point);
    case Expr::Kind::Sub:
      return eval_at(*e.a, point) - eval_at(*e.b, point);
    case Expr::Kind::Mul:
      return eval_at(*e.a, point) * eval_at(*e.b, point);
    case Expr::Kind::Div: {
      Real num = eval_at(*e.a, point);
      Real den = eval_at(*e.b, point);
      if (den == Real(0))
        throw ExprError("division by zero at position " +
                        std::to_string(e.srcpos));
      return num / den;
    }
    case Expr::Kind::Pow: {
      Real base = eval_at(*e.a, point);
      Real out = base;
      for (int k = 1; k < e.exponent; ++k) out *= base;
      return out;
    }
    case Expr::Kind::Bump: {
      Real t = eval_at(*e.a, point);
      Real d = Real(e.delta);
      if (!(t < d)) return Real(0);
      using std::exp;
      return exp(-d / (d - t));
    }
  }
  throw ExprError("corrupt expression node");
}

template <class Real>
Real eval(const ExprPtr& ast, const std::vector<Real>& point) {
  return eval_at(*ast, point.data());
}

}  // namespace spc
