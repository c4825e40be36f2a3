#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "geometry/sample.hpp"
#include "ma/fefferman.hpp"

namespace spc {

// Two weightings of the gradient term in the boundary functional: the
// canonical one carries 1/(n+1)^2, the alternative drops that factor. They
// are reported side by side when they disagree in sign.
enum class L2Variant { canonical, definition };

// boundary functional whose positivity certifies super-pseudoconvexity of
// the supplied defining function:
//   1 + S lap(log J)/(n(n+1)) - 2 Re R(log J)/(n+1) - c S |grad log J|^2
// with S = |dr|^2_r and c the variant weight
double L2(const WirtingerData& w, const RaisedData& rd, const LogJDerivs& d,
          L2Variant variant = L2Variant::canonical);

struct DetHRho {
  double primary = 0;          // det H(r) * L2 * J^{-n/(n+1)}
  double cross = 0;            // rank-one-corrected determinant route
  double rel_disagreement = 0; // conditioning indicator
};

// boundary value of det H(rho) for rho = r J^{-1/(n+1)} e^{-B}, by two
// independent assemblies; disagreement beyond 1e-6 marks the point as
// ill-conditioned
DetHRho detH_rho_boundary(const WirtingerData& w, const RaisedData& rd,
                          const LogJDerivs& d);

struct ETriple {
  double value = 0;  // error term of the L2 decomposition
  double lower = 0;  // curvature-tensor lower bound
  double upper = 0;  // curvature-tensor upper bound
};

// E with its two-sided bounds; value <= 0 pulls L2 below the convexity
// baseline, the bounds need only third/fourth derivative tensors
ETriple E_tilde(const WirtingerData& w, const RaisedData& rd,
                const LogJDerivs& d);

// planar boundary invariant (n = 1 only): r_{1 1bar} - Re(e^{2 i theta}
// r_{11}) with theta aligning r_1 to the positive real axis; positive
// exactly where the boundary is convex
double S_r(const WirtingerData& w);

// left side of the convexity-based sufficient condition (n > 1); positive
// on a convex domain certifies strict super-pseudoconvexity
double convex_sufficient(const WirtingerData& w, const RaisedData& rd);

// companion boundary quantity that is nonnegative on convex domains:
//   2/(n+1) - (2/(n+1)) Re(r^k r^i r_{ik})/S - a^{kl} u_k conj(u_l)/((n+1)S)
double convex_companion(const WirtingerData& w, const RaisedData& rd);

struct RicciValue {
  cplx value;          // full pseudo-Ricci pairing
  bool einstein_mode;  // J = 1 + O(r^2) detected at this point
  cplx einstein_value; // simplified form without the log J term
};

// pseudo-Ricci curvature paired against tangent vectors w_vec, v_vec;
// throws unless both satisfy |sum_j r_j v_j| <= 1e-8
RicciValue pseudo_ricci(const WirtingerData& w, const RaisedData& rd,
                        const LogJDerivs& d, const Eigen::VectorXcd& w_vec,
                        const Eigen::VectorXcd& v_vec);

struct CriteriaPointData {
  double l2 = 0;
  double l2_alt = 0;  // the other variant's value
  double e_tilde = 0, e_lower = 0, e_upper = 0;
  double detH_rho_boundary = 0;
  double detH_rho_cross = 0;
  double detH_rho_disagreement = 0;
  double s_r = 0;            // n = 1 only, NaN otherwise
  double conv_crit_lhs = 0;  // n > 1 only, NaN otherwise
  double pseudo_ricci_min = 0;  // min over the tangent frame, NaN for n = 1
};

// evaluate every boundary criterion at one point; `frame` spans the complex
// tangent space there (pseudo_ricci_min is NaN when it is empty)
CriteriaPointData criteria_point(const Taylor<double>& rjet,
                                 const std::vector<Eigen::VectorXcd>& frame,
                                 L2Variant variant = L2Variant::canonical);

// smallest eigenvalue of the real Hessian of r restricted to the real
// tangent hyperplane; decides convexity at a boundary point
double real_tangent_hessian_min_eig(const Taylor<double>& rjet);

enum class SuperPsc { strictly_super_psc, super_psc, not_super_psc,
                      inconclusive };
enum class Convexity { strictly_convex, convex, not_convex };

const char* to_string(SuperPsc c);
const char* to_string(Convexity c);

struct Verdict {
  SuperPsc classification = SuperPsc::inconclusive;
  double margin = 0;  // min of L2 over the samples
  Convexity convexity = Convexity::not_convex;
  BoundarySample worst_point;
  bool at_tolerance = false;  // |margin| within the decision tolerance
  std::string reason;         // set when inconclusive
};

struct ClassifyResult {
  Verdict verdict;
  std::vector<BoundarySample> samples;
  std::vector<CriteriaPointData> points;
  std::vector<double> shift_a;      // plurisubharmonic shift used per sample
  std::vector<double> conv_min_eig; // tangent real-Hessian eigenvalue
};

// deterministic boundary classification of the supplied defining function:
// samples the boundary, shifts the jet where the complex Hessian is not
// positive definite, evaluates the criteria per sample (parallel map), and
// reduces to a Verdict. A negative verdict speaks only about this r.
ClassifyResult classify(const DomainSpec& domain, int n_samples,
                        std::uint64_t seed,
                        L2Variant variant = L2Variant::canonical,
                        int threads = 1);

}  // namespace spc
