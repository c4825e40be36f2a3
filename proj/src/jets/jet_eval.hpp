#pragma once

#include <vector>

#include "expr/ast.hpp"
#include "jets/taylor.hpp"

namespace spc {

// Taylor expansion of the expression at `point`, truncated to `order`.
// Coefficients are exact truncated-Taylor algebra: for polynomials of degree
// <= order they equal the analytic derivatives (over alpha!) up to roundoff.
Taylor<double> jet_eval(const ExprPtr& ast, const std::vector<double>& point,
                        int order = 4);

}  // namespace spc
