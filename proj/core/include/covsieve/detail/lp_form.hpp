#pragma once

#include <vector>

#include "covsieve/lp.hpp"

namespace covsieve::lp::detail {

/// Computational-form column layout shared by the floating solver and the
/// exact rational re-solve.  Structural columns come first (a free variable
/// splits into a positive and a negative part), then one slack or surplus
/// column per inequality row, then one artificial column per row that needs
/// one.  Rows with negative right-hand side are sign-normalized.
struct Form {
  int num_rows = 0;
  int num_struct = 0;
  int num_cols = 0;             // structural + slack/surplus + artificial
  int first_artificial = 0;     // columns >= this are artificial
  std::vector<int> var_col;     // first computational column per model variable
  std::vector<bool> var_free;
  std::vector<int> row_sign;    // +1 / -1 after normalization
  std::vector<int> companion;   // slack (+1) or surplus (-1) column per row, -1 if none
  std::vector<int> companion_sign;
  std::vector<int> artificial;  // artificial column per row, -1 if none
  std::vector<int> identity;    // per row: the column whose initial vector is e_row
};

Form make_form(const Model& model);

/// Entry of the computational constraint matrix.
template <class T>
T form_entry(const Model& model, const Form& form, int row, int col) {
  const auto r = static_cast<std::size_t>(row);
  if (col < form.num_struct) {
    // find the variable owning the column
    // (var_col is increasing; callers use form_fill for bulk access)
    for (std::size_t v = 0; v < model.num_vars(); ++v) {
      const int c0 = form.var_col[v];
      const int width = form.var_free[v] ? 2 : 1;
      if (col >= c0 && col < c0 + width) {
        const T base = T(model.rows[r].coeffs[v]) * T(form.row_sign[r]);
        return col == c0 ? base : -base;
      }
    }
    return T(0);
  }
  if (form.companion[r] == col) return T(form.companion_sign[r]);
  if (form.artificial[r] == col) return T(1);
  return T(0);
}

/// Dense row of the computational matrix plus its right-hand side.
template <class T>
void form_fill_row(const Model& model, const Form& form, int row, T* out, T* rhs) {
  const auto r = static_cast<std::size_t>(row);
  for (int c = 0; c < form.num_cols; ++c) out[c] = T(0);
  const T sign = T(form.row_sign[r]);
  for (std::size_t v = 0; v < model.num_vars(); ++v) {
    const double a = model.rows[r].coeffs[v];
    if (a == 0) continue;
    const int c0 = form.var_col[v];
    out[c0] = T(a) * sign;
    if (form.var_free[v]) out[c0 + 1] = -out[c0];
  }
  if (form.companion[r] >= 0) out[form.companion[r]] = T(form.companion_sign[r]);
  if (form.artificial[r] >= 0) out[form.artificial[r]] = T(1);
  *rhs = T(model.rows[r].rhs) * sign;
}

/// Phase-2 cost of a computational column.
template <class T>
T form_cost(const Model& model, const Form& form, int col) {
  if (col >= form.num_struct) return T(0);
  for (std::size_t v = 0; v < model.num_vars(); ++v) {
    const int c0 = form.var_col[v];
    const int width = form.var_free[v] ? 2 : 1;
    if (col >= c0 && col < c0 + width) {
      const T base = T(model.objective[v]);
      return col == c0 ? base : -base;
    }
  }
  return T(0);
}

}  // namespace covsieve::lp::detail
