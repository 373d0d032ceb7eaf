#pragma once

// Pattern-based preparation: rewrites a supported expression on a cell as a
// finite sum of prepared generators. Supported shapes, per multiplicative
// factor after flattening sums and products:
//   - x-only factors (into G0), including f(x)^{alpha*s} parametric powers
//   - y^{alpha*s + c} monomials and (log y)^k factors
//   - units (1 + sum_i c_i(x) y^{q_i})^{alpha*s + c} whose deviation
//     certifies <= 1/2 (binomial streams), with integer constant exponents
//     admitted up to deviation < 1 (geometric streams)
//   - K-powers and parametric powers of products of the above
// Anything else raises unsupported_error naming the offending subterm.

#include "pcm/cells.hpp"

namespace pcm {

std::vector<PreparedGenerator> prepare_pattern(const XExpr& expr, const Cell1D& cell);

}  // namespace pcm
