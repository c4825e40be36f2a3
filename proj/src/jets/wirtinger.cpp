#include "jets/wirtinger.hpp"

namespace spc {

Taylor<cplx> wirt_jet(const Taylor<cplx>& f, const std::vector<int>& hol,
                      const std::vector<int>& anti) {
  int n = f.space().dim() / 2;
  Taylor<cplx> g = f;
  for (int i : hol) {
    Taylor<cplx> gx = g.derivative(i), gy = g.derivative(n + i);
    g = (gx - gy * cplx(0.0, 1.0)) * cplx(0.5, 0.0);
  }
  for (int j : anti) {
    Taylor<cplx> gx = g.derivative(j), gy = g.derivative(n + j);
    g = (gx + gy * cplx(0.0, 1.0)) * cplx(0.5, 0.0);
  }
  return g;
}

WirtingerData wirtinger(const Taylor<double>& jet) {
  if (jet.space().dim() % 2 != 0)
    throw JetError("Wirtinger conversion needs an even real dimension");
  WirtingerData w;
  w.n = jet.space().dim() / 2;
  w.order = jet.space().order();
  w.r = jet.value();
  int n = w.n;

  w.grad = Eigen::VectorXcd::Zero(n);
  w.hess = Eigen::MatrixXcd::Zero(n, n);
  w.hess_hol = Eigen::MatrixXcd::Zero(n, n);
  w.d3.assign(std::size_t(n) * n * n, cplx(0.0));
  w.d4.assign(std::size_t(n) * n * n * n, cplx(0.0));

  if (w.order >= 1)
    for (int i = 0; i < n; ++i) w.grad(i) = wirt_value(jet, {i}, {});
  if (w.order >= 2)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        w.hess(i, j) = wirt_value(jet, {i}, {j});
        w.hess_hol(i, j) = wirt_value(jet, {i, j}, {});
      }
  if (w.order >= 3)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          w.d3[std::size_t(i * n + j) * n + k] = wirt_value(jet, {i, k}, {j});
  if (w.order >= 4)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            w.d4[(std::size_t(i * n + j) * n + k) * n + l] =
                wirt_value(jet, {i, k}, {j, l});
  return w;
}

}  // namespace spc
