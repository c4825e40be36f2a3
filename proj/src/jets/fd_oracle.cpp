#include "jets/fd_oracle.hpp"

namespace spc {
namespace {

long double nested(const Expr& ast, std::vector<long double>& p,
                   const std::vector<int>& vars, std::size_t k,
                   long double h) {
  if (k == vars.size()) return eval_at<long double>(ast, p.data());
  int v = vars[k];
  p[v] += h;
  long double fp = nested(ast, p, vars, k + 1, h);
  p[v] -= 2 * h;
  long double fm = nested(ast, p, vars, k + 1, h);
  p[v] += h;
  return (fp - fm) / (2 * h);
}

}  // namespace

double fd_oracle(const ExprPtr& ast, const std::vector<double>& point,
                 const std::vector<int>& multi_index, double h) {
  std::vector<int> vars;
  for (std::size_t v = 0; v < multi_index.size(); ++v)
    for (int c = 0; c < multi_index[v]; ++c) vars.push_back(int(v));
  if (vars.size() > 4)
    throw ExprError("finite-difference oracle handles orders <= 4");

  std::vector<long double> p(point.begin(), point.end());
  if (vars.empty()) return double(eval_at<long double>(*ast, p.data()));

  if (h <= 0.0) {
    // dyadic steps balancing truncation against long-double roundoff
    static const double defaults[5] = {0.0, 0x1p-12, 0x1p-10, 0x1p-8, 0x1p-6};
    h = defaults[vars.size()];
  }
  long double fh = nested(*ast, p, vars, 0, (long double)h);
  long double fh2 = nested(*ast, p, vars, 0, (long double)h / 2);
  return double((4.0L * fh2 - fh) / 3.0L);
}

}  // namespace spc
