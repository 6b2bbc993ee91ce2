#pragma once

#include <string>
#include <vector>

namespace covsieve::lp {

enum class Relation { le, eq };

struct Constraint {
  std::vector<double> coeffs;  // one per variable
  Relation relation = Relation::le;
  double rhs = 0;
};

/// Minimize objective . x  (+ objective_constant) over x subject to the
/// constraints, with x >= 0 except where free_vars marks a variable free.
struct Model {
  std::vector<std::string> names;  // optional, used by dump()
  std::vector<double> objective;
  double objective_constant = 0;
  std::vector<Constraint> rows;
  std::vector<bool> free_vars;  // empty means all nonnegative

  std::size_t num_vars() const { return objective.size(); }
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  double objective = 0;  // includes the model's objective_constant
  std::vector<double> x;
  /// Self-check numbers for an optimal solve: the worst primal constraint
  /// violation and the duality gap reconstructed from the final basis.
  double primal_error = 0;
  double duality_gap = 0;
  int iterations = 0;
  /// Final basis, one computational-form column id per active row; used by
  /// the exact rational re-solve.  Column ids: [0, n_std) structural columns
  /// (free variables occupy two consecutive ids), then one slack or
  /// artificial column per original row.
  std::vector<int> basis;
  std::vector<int> basis_rows;  // original row index per active row
};

/// Dense two-phase primal simplex.  Entering column: most negative reduced
/// cost, lowest index on ties (Dantzig pricing); leaving row: smallest ratio
/// with lexicographic tie-breaking, which makes the pivot sequence
/// deterministic and cycle-free.
Solution solve(const Model& model);

/// CPLEX-style LP text format, for cross-checking with external tools.
std::string dump(const Model& model);

}  // namespace covsieve::lp
