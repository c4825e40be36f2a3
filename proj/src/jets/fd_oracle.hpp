#pragma once

#include <vector>

#include "expr/ast.hpp"

namespace spc {

// Independent derivative oracle: nested central differences in long double
// with one Richardson level, so the truncation error is O(h^4) (exact for
// polynomials of total degree <= 4). multi_index holds per-coordinate
// exponents, total order <= 4. h = 0 picks a per-order default.
double fd_oracle(const ExprPtr& ast, const std::vector<double>& point,
                 const std::vector<int>& multi_index, double h = 0.0);

}  // namespace spc
