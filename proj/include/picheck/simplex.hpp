#pragma once

// Small dense primal simplex for packing linear programs
//     max c.x   s.t.  A x <= b,  x >= 0,  with b >= 0.
// Slack variables give the starting basis, Bland's rule (lowest eligible
// index for both entering and leaving variable) prevents cycling.  The dual
// vector is read off the slack columns of the final tableau; desk-scale
// problems only, no sparsity, no scaling tricks.

#include <cstddef>
#include <vector>

namespace picheck::lp {

struct PackingResult {
  double objective = 0.0;
  std::vector<double> x;     // primal solution
  std::vector<double> dual;  // one multiplier per row, >= 0
  std::size_t pivots = 0;
};

// rows: constraint coefficients (m rows of n entries); b: nonnegative rhs;
// c: objective.  Throws on shape errors, negative rhs, or an unbounded ray.
PackingResult solve_packing(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& b,
                            const std::vector<double>& c);

}  // namespace picheck::lp
