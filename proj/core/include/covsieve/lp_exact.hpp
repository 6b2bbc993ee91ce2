#pragma once

#include <string>
#include <vector>

#include "covsieve/lp.hpp"

namespace covsieve::lp {

/// Outcome of re-solving the final basis of an optimal solve in exact
/// rational arithmetic: feasibility of the basic solution, optimality of the
/// basis, and the exact objective value.
struct ExactCertificate {
  bool valid = false;        // basis is primal feasible and dual feasible
  std::string objective;     // exact objective as "p/q"
  std::string objective_decimal;  // rounded-down decimal expansion
  std::string failure;       // reason when not valid
};

/// Verify the basis returned by solve() with exact arithmetic.  All model
/// coefficients are taken at their exact binary floating-point values.
/// `extra_feasibility_rows`, when given, are additionally checked against the
/// exact solution (same variable order); a model whose optimum was obtained
/// by row generation is thereby certified against the full row set.
ExactCertificate exact_resolve(const Model& model, const Solution& solution,
                               int decimal_digits = 12,
                               const std::vector<Constraint>* extra_feasibility_rows = nullptr);

}  // namespace covsieve::lp
