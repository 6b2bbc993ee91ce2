#include "covsieve/lp_exact.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <vector>

#include "covsieve/detail/lp_form.hpp"

namespace covsieve::lp {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Solve M x = rhs for square M by fraction-free-ish Gaussian elimination
/// over the rationals.  Returns false when M is singular.
bool solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> rhs,
                  std::vector<Rational>& out) {
  const std::size_t n = m.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) return false;
    std::swap(m[col], m[piv]);
    std::swap(rhs[col], rhs[piv]);
    const Rational inv = m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      const Rational f = m[r][col] / inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  out.assign(n, Rational(0));
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= m[i][c] * out[c];
    out[i] = acc / m[i][i];
  }
  return true;
}

std::string decimal_expansion(const Rational& q, int digits) {
  Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  std::string sign;
  if (num < 0) {
    sign = "-";
    num = -num;
  }
  const Integer whole = num / den;
  Integer rem = num % den;
  std::string out = sign + whole.str() + ".";
  for (int i = 0; i < digits; ++i) {
    rem *= 10;
    const Integer digit = rem / den;
    out += digit.str();
    rem %= den;
  }
  return out;
}

}  // namespace

ExactCertificate exact_resolve(const Model& model, const Solution& solution, int decimal_digits,
                               const std::vector<Constraint>* extra_feasibility_rows) {
  ExactCertificate cert;
  if (solution.status != Status::optimal) {
    cert.failure = "solution is not optimal";
    return cert;
  }
  const detail::Form form = detail::make_form(model);
  const auto m = solution.basis.size();
  if (m != solution.basis_rows.size()) {
    cert.failure = "inconsistent basis bookkeeping";
    return cert;
  }

  // basis matrix restricted to the rows that survived redundancy elimination
  std::vector<std::vector<Rational>> bmat(m, std::vector<Rational>(m));
  std::vector<Rational> rhs(m);
  std::vector<Rational> full_row(static_cast<std::size_t>(form.num_cols));
  std::vector<std::vector<Rational>> rows(m);
  for (std::size_t r = 0; r < m; ++r) {
    Rational b;
    detail::form_fill_row<Rational>(model, form, solution.basis_rows[r], full_row.data(), &b);
    rows[r] = full_row;
    rhs[r] = b;
    for (std::size_t c = 0; c < m; ++c) {
      bmat[r][c] = full_row[static_cast<std::size_t>(solution.basis[c])];
    }
  }

  std::vector<Rational> xb;
  if (!solve_square(bmat, rhs, xb)) {
    cert.failure = "basis matrix is singular";
    return cert;
  }
  for (const Rational& v : xb) {
    if (v < 0) {
      cert.failure = "basic solution has a negative component";
      return cert;
    }
  }

  // dual: solve B^T y = c_B, then check reduced costs over all columns
  std::vector<std::vector<Rational>> bt(m, std::vector<Rational>(m));
  std::vector<Rational> cb(m);
  for (std::size_t c = 0; c < m; ++c) {
    cb[c] = detail::form_cost<Rational>(model, form, solution.basis[c]);
    for (std::size_t r = 0; r < m; ++r) {
      bt[c][r] = rows[r][static_cast<std::size_t>(solution.basis[c])];
    }
  }
  std::vector<Rational> y;
  if (!solve_square(bt, cb, y)) {
    cert.failure = "basis transpose is singular";
    return cert;
  }
  for (int col = 0; col < form.first_artificial; ++col) {
    Rational reduced = detail::form_cost<Rational>(model, form, col);
    for (std::size_t r = 0; r < m; ++r) {
      reduced -= y[r] * rows[r][static_cast<std::size_t>(col)];
    }
    if (reduced < 0) {
      cert.failure = "negative reduced cost at column " + std::to_string(col);
      return cert;
    }
  }

  Rational objective(0);
  for (std::size_t c = 0; c < m; ++c) objective += cb[c] * xb[c];
  objective += Rational(model.objective_constant);

  // exact primal feasibility against every original row
  {
    std::vector<Rational> xfull(static_cast<std::size_t>(form.num_cols), Rational(0));
    for (std::size_t c = 0; c < m; ++c) {
      xfull[static_cast<std::size_t>(solution.basis[c])] = xb[c];
    }
    std::vector<Rational> xvars(model.num_vars(), Rational(0));
    for (std::size_t v = 0; v < model.num_vars(); ++v) {
      const int c0 = form.var_col[v];
      xvars[v] = xfull[static_cast<std::size_t>(c0)];
      if (form.var_free[v]) xvars[v] -= xfull[static_cast<std::size_t>(c0) + 1];
    }
    auto check_rows = [&](const std::vector<Constraint>& rows_to_check) {
      for (const auto& row : rows_to_check) {
        Rational lhs(0);
        for (std::size_t v = 0; v < model.num_vars(); ++v) {
          if (row.coeffs[v] != 0) lhs += Rational(row.coeffs[v]) * xvars[v];
        }
        const Rational b(row.rhs);
        if (row.relation == Relation::eq ? lhs != b : lhs > b) return false;
      }
      return true;
    };
    if (!check_rows(model.rows)) {
      cert.failure = "an original constraint is violated";
      return cert;
    }
    if (extra_feasibility_rows && !check_rows(*extra_feasibility_rows)) {
      cert.failure = "a reference constraint is violated";
      return cert;
    }
  }

  cert.valid = true;
  cert.objective = objective.str();
  cert.objective_decimal = decimal_expansion(objective, decimal_digits);
  return cert;
}

}  // namespace covsieve::lp
