#pragma once

#include <vector>

#include "geometry/sample.hpp"
#include "ma/fefferman.hpp"

namespace spc {

// J applied to the candidate approximate solution rho = r J^{-1/(n+1)} e^{-B}
// (or rho0 = r J^{-1/(n+1)} when with_B is false), evaluated at the jet's
// base point. The whole chain runs on jets: the input must carry order >= 6
// so that B still has two derivatives left.
double J_of_rho(const Taylor<double>& rjet, bool with_B);

struct DefectScan {
  std::vector<double> depths;   // ray depths t
  std::vector<double> rvals;    // r at the scanned points (negative inside)
  std::vector<double> defects;  // |J(rho) - 1|
  bool exact = false;           // every defect below 1e-13
  double slope = 0.0;           // tail least-squares slope of log-defect
                                // against log|r|; NaN when exact
};

// scan along boundary_point + t * inward_normal for the given depths
// (descending); the slope is fitted over the finest three usable depths
DefectScan defect_scan(const DomainSpec& domain, const BoundarySample& bs,
                       const std::vector<double>& depths, bool with_B = true);

}  // namespace spc
