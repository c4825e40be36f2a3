#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "jets/taylor.hpp"

namespace spc {

using cplx = std::complex<double>;

// Mixed complex derivatives of a real function at a point, read from its real
// Taylor jet via d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2.
// Index convention (0-based): hess(i,j) = r_{i jbar}, third(i,j,k) =
// r_{i jbar k}, fourth(i,j,k,l) = r_{i jbar k lbar}.
struct WirtingerData {
  int n = 0;
  int order = 0;  // highest populated derivative order
  double r = 0.0;
  Eigen::VectorXcd grad;      // r_i
  Eigen::MatrixXcd hess;      // r_{i jbar}, Hermitian
  Eigen::MatrixXcd hess_hol;  // r_{ij}, symmetric
  std::vector<cplx> d3;       // r_{i jbar k}
  std::vector<cplx> d4;       // r_{i jbar k lbar}

  cplx third(int i, int j, int k) const { return d3[(i * n + j) * n + k]; }
  cplx fourth(int i, int j, int k, int l) const {
    return d4[((i * n + j) * n + k) * n + l];
  }
  cplx grad_bar(int i) const { return std::conj(grad(i)); }
  // r_{i jbar kbar} by reality of r
  cplx third_bar(int i, int j, int k) const { return std::conj(third(j, i, k)); }
};

// value of the mixed Wirtinger derivative with holomorphic indices `hol` and
// antiholomorphic indices `anti` (0-based complex coordinates)
template <class S>
cplx wirt_value(const Taylor<S>& f, const std::vector<int>& hol,
                const std::vector<int>& anti) {
  int n = f.space().dim() / 2;
  int k = int(hol.size() + anti.size());
  std::vector<std::uint8_t> a(f.space().dim());
  cplx sum = 0.0;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::fill(a.begin(), a.end(), 0);
    cplx factor = 1.0;
    for (int s = 0; s < k; ++s) {
      bool is_anti = s >= int(hol.size());
      int idx = is_anti ? anti[s - hol.size()] : hol[s];
      bool pick_y = (mask >> s) & 1u;
      a[pick_y ? n + idx : idx] += 1;
      factor *= pick_y ? (is_anti ? cplx(0.0, 0.5) : cplx(0.0, -0.5))
                       : cplx(0.5, 0.0);
    }
    std::size_t p = f.space().position(a.data());
    sum += factor * cplx(f[p]) * f.space().factorial(p);
  }
  return sum;
}

// jet of the Wirtinger-derivative field (coefficient shift, one derivative per
// listed index); result order drops by hol.size() + anti.size()
Taylor<cplx> wirt_jet(const Taylor<cplx>& f, const std::vector<int>& hol,
                      const std::vector<int>& anti);

WirtingerData wirtinger(const Taylor<double>& jet);

}  // namespace spc
