#include "covsieve/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "covsieve/detail/lp_form.hpp"

namespace covsieve::lp {

namespace detail {

Form make_form(const Model& model) {
  Form f;
  const auto nvars = model.num_vars();
  f.num_rows = static_cast<int>(model.rows.size());
  f.var_col.resize(nvars);
  f.var_free.resize(nvars);
  int col = 0;
  for (std::size_t v = 0; v < nvars; ++v) {
    const bool fr = v < model.free_vars.size() && model.free_vars[v];
    f.var_col[v] = col;
    f.var_free[v] = fr;
    col += fr ? 2 : 1;
  }
  f.num_struct = col;
  f.row_sign.assign(static_cast<std::size_t>(f.num_rows), 1);
  f.companion.assign(static_cast<std::size_t>(f.num_rows), -1);
  f.companion_sign.assign(static_cast<std::size_t>(f.num_rows), 0);
  f.artificial.assign(static_cast<std::size_t>(f.num_rows), -1);
  f.identity.assign(static_cast<std::size_t>(f.num_rows), -1);
  for (int r = 0; r < f.num_rows; ++r) {
    const auto& row = model.rows[static_cast<std::size_t>(r)];
    const bool flip = row.rhs < 0;
    f.row_sign[static_cast<std::size_t>(r)] = flip ? -1 : 1;
    if (row.relation == Relation::le) {
      // a <= b becomes -a >= -b when flipped: surplus plus artificial
      f.companion[static_cast<std::size_t>(r)] = col++;
      f.companion_sign[static_cast<std::size_t>(r)] = flip ? -1 : 1;
    }
  }
  f.first_artificial = col;
  for (int r = 0; r < f.num_rows; ++r) {
    const auto& row = model.rows[static_cast<std::size_t>(r)];
    const bool flip = row.rhs < 0;
    if (row.relation == Relation::eq || flip) {
      f.artificial[static_cast<std::size_t>(r)] = col++;
      f.identity[static_cast<std::size_t>(r)] = f.artificial[static_cast<std::size_t>(r)];
    } else {
      f.identity[static_cast<std::size_t>(r)] = f.companion[static_cast<std::size_t>(r)];
    }
  }
  f.num_cols = col;
  return f;
}

}  // namespace detail

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr double kRatioTieTol = 1e-9;
constexpr int kMaxIterations = 1'000'000;

struct Tableau {
  int m = 0;
  int cols = 0;
  std::vector<double> a;  // m x cols, row major
  std::vector<double> b;
  std::vector<int> basic;     // basic column per row
  std::vector<int> orig_row;  // original model row per tableau row
  std::vector<char> is_basic;

  double* row(int r) { return a.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols); }
  const double* row(int r) const {
    return a.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols);
  }
};

void pivot(Tableau& t, std::vector<double>& cost, std::vector<double>& cost2, int r, int q) {
  double* pr = t.row(r);
  const double inv = 1.0 / pr[q];
  for (int c = 0; c < t.cols; ++c) pr[c] *= inv;
  pr[q] = 1.0;
  t.b[static_cast<std::size_t>(r)] *= inv;
  for (int r2 = 0; r2 < t.m; ++r2) {
    if (r2 == r) continue;
    double* p2 = t.row(r2);
    const double f = p2[q];
    if (f == 0.0) continue;
    for (int c = 0; c < t.cols; ++c) p2[c] -= f * pr[c];
    p2[q] = 0.0;
    t.b[static_cast<std::size_t>(r2)] -= f * t.b[static_cast<std::size_t>(r)];
  }
  auto apply = [&](std::vector<double>& crow) {
    if (crow.empty()) return;
    const double f = crow[static_cast<std::size_t>(q)];
    if (f == 0.0) return;
    for (int c = 0; c < t.cols; ++c) crow[static_cast<std::size_t>(c)] -= f * pr[c];
    crow[static_cast<std::size_t>(q)] = 0.0;
  };
  apply(cost);
  apply(cost2);
  t.is_basic[static_cast<std::size_t>(t.basic[static_cast<std::size_t>(r)])] = 0;
  t.basic[static_cast<std::size_t>(r)] = q;
  t.is_basic[static_cast<std::size_t>(q)] = 1;
}

/// Lexicographic comparison of rows r1 and r2 scaled by their pivot-column
/// entries, over [b | identity columns in row order].
bool lex_less(const Tableau& t, const std::vector<int>& ident_cols, int r1, int r2, int q) {
  const double p1 = t.row(r1)[q];
  const double p2 = t.row(r2)[q];
  const double b1 = t.b[static_cast<std::size_t>(r1)] / p1;
  const double b2 = t.b[static_cast<std::size_t>(r2)] / p2;
  if (b1 != b2) return b1 < b2;
  for (int c : ident_cols) {
    const double v1 = t.row(r1)[c] / p1;
    const double v2 = t.row(r2)[c] / p2;
    if (v1 != v2) return v1 < v2;
  }
  return r1 < r2;
}

enum class PhaseOutcome { optimal, unbounded };

PhaseOutcome run_phase(Tableau& t, std::vector<double>& cost, std::vector<double>& other_cost,
                       const std::vector<char>& allowed, const std::vector<int>& ident_cols,
                       bool phase1, int& iterations) {
  std::vector<char> banned(static_cast<std::size_t>(t.cols), 0);
  for (;;) {
    int q = -1;
    double best = -kCostTol;
    for (int c = 0; c < t.cols; ++c) {
      if (!allowed[static_cast<std::size_t>(c)] || t.is_basic[static_cast<std::size_t>(c)] ||
          banned[static_cast<std::size_t>(c)]) {
        continue;
      }
      const double d = cost[static_cast<std::size_t>(c)];
      if (d < best) {
        best = d;
        q = c;
      }
    }
    if (q < 0) return PhaseOutcome::optimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < t.m; ++r) {
      const double arq = t.row(r)[q];
      if (arq <= kPivotTol) continue;
      const double ratio = t.b[static_cast<std::size_t>(r)] / arq;
      if (leave < 0 || ratio < best_ratio - kRatioTieTol * (1.0 + std::abs(best_ratio))) {
        leave = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + kRatioTieTol * (1.0 + std::abs(best_ratio))) {
        if (lex_less(t, ident_cols, r, leave, q)) {
          leave = r;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
    }
    if (leave < 0) {
      // the phase-1 objective is bounded below, so no leaving row there means
      // a numerically null column; retire it instead
      if (phase1) {
        banned[static_cast<std::size_t>(q)] = 1;
        continue;
      }
      return PhaseOutcome::unbounded;
    }
    if (++iterations > kMaxIterations) {
      throw std::runtime_error("lp::solve: iteration limit exceeded");
    }
    pivot(t, cost, other_cost, leave, q);
  }
}

void drop_row(Tableau& t, std::vector<int>& ident_cols, int r) {
  const int last = t.m - 1;
  if (r != last) {
    for (int c = 0; c < t.cols; ++c) t.row(r)[c] = t.row(last)[c];
    t.b[static_cast<std::size_t>(r)] = t.b[static_cast<std::size_t>(last)];
    t.basic[static_cast<std::size_t>(r)] = t.basic[static_cast<std::size_t>(last)];
    t.orig_row[static_cast<std::size_t>(r)] = t.orig_row[static_cast<std::size_t>(last)];
    ident_cols[static_cast<std::size_t>(r)] = ident_cols[static_cast<std::size_t>(last)];
  }
  t.m = last;
  t.b.resize(static_cast<std::size_t>(last));
  t.basic.resize(static_cast<std::size_t>(last));
  t.orig_row.resize(static_cast<std::size_t>(last));
  ident_cols.resize(static_cast<std::size_t>(last));
  t.a.resize(static_cast<std::size_t>(last) * static_cast<std::size_t>(t.cols));
}

}  // namespace

Solution solve(const Model& model) {
  const auto nvars = model.num_vars();
  if (nvars == 0) throw std::invalid_argument("lp::solve: model needs at least one variable");
  for (double c : model.objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("lp::solve: non-finite objective");
  }
  for (const auto& row : model.rows) {
    if (row.coeffs.size() != nvars) {
      throw std::invalid_argument("lp::solve: constraint width mismatch");
    }
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("lp::solve: non-finite rhs");
    for (double a : row.coeffs) {
      if (!std::isfinite(a)) throw std::invalid_argument("lp::solve: non-finite coefficient");
    }
  }

  const detail::Form form = detail::make_form(model);
  Tableau t;
  t.m = form.num_rows;
  t.cols = form.num_cols;
  t.a.assign(static_cast<std::size_t>(t.m) * static_cast<std::size_t>(t.cols), 0.0);
  t.b.assign(static_cast<std::size_t>(t.m), 0.0);
  t.basic.resize(static_cast<std::size_t>(t.m));
  t.orig_row.resize(static_cast<std::size_t>(t.m));
  t.is_basic.assign(static_cast<std::size_t>(t.cols), 0);
  std::vector<int> ident_cols(static_cast<std::size_t>(t.m));
  for (int r = 0; r < t.m; ++r) {
    detail::form_fill_row<double>(model, form, r, t.row(r), &t.b[static_cast<std::size_t>(r)]);
    t.basic[static_cast<std::size_t>(r)] = form.identity[static_cast<std::size_t>(r)];
    t.is_basic[static_cast<std::size_t>(form.identity[static_cast<std::size_t>(r)])] = 1;
    t.orig_row[static_cast<std::size_t>(r)] = r;
    ident_cols[static_cast<std::size_t>(r)] = form.identity[static_cast<std::size_t>(r)];
  }

  std::vector<double> zrow(static_cast<std::size_t>(t.cols), 0.0);
  for (int c = 0; c < form.num_struct; ++c) {
    zrow[static_cast<std::size_t>(c)] = detail::form_cost<double>(model, form, c);
  }

  Solution sol;
  sol.x.assign(nvars, 0.0);
  int iterations = 0;

  const bool has_artificials = form.first_artificial < form.num_cols;
  if (has_artificials) {
    // phase-1 reduced costs: minimize the sum of artificial values
    std::vector<double> wrow(static_cast<std::size_t>(t.cols), 0.0);
    for (int c = form.first_artificial; c < t.cols; ++c) wrow[static_cast<std::size_t>(c)] = 1.0;
    for (int r = 0; r < t.m; ++r) {
      if (t.basic[static_cast<std::size_t>(r)] >= form.first_artificial) {
        for (int c = 0; c < t.cols; ++c) wrow[static_cast<std::size_t>(c)] -= t.row(r)[c];
      }
    }
    std::vector<char> allowed(static_cast<std::size_t>(t.cols), 1);
    for (int c = form.first_artificial; c < t.cols; ++c) allowed[static_cast<std::size_t>(c)] = 0;
    run_phase(t, wrow, zrow, allowed, ident_cols, /*phase1=*/true, iterations);

    double infeas = 0.0;
    for (int r = 0; r < t.m; ++r) {
      if (t.basic[static_cast<std::size_t>(r)] >= form.first_artificial) {
        infeas += t.b[static_cast<std::size_t>(r)];
      }
    }
    if (infeas > 1e-8) {
      sol.status = Status::infeasible;
      sol.iterations = iterations;
      return sol;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    for (int r = t.m - 1; r >= 0; --r) {
      if (t.basic[static_cast<std::size_t>(r)] < form.first_artificial) continue;
      int col = -1;
      for (int c = 0; c < form.first_artificial; ++c) {
        if (!t.is_basic[static_cast<std::size_t>(c)] && std::abs(t.row(r)[c]) > 1e-9) {
          col = c;
          break;
        }
      }
      if (col >= 0) {
        std::vector<double> none;
        pivot(t, zrow, none, r, col);
      } else {
        t.is_basic[static_cast<std::size_t>(t.basic[static_cast<std::size_t>(r)])] = 0;
        drop_row(t, ident_cols, r);
      }
    }
  }

  std::vector<char> allowed(static_cast<std::size_t>(t.cols), 1);
  for (int c = form.first_artificial; c < t.cols; ++c) allowed[static_cast<std::size_t>(c)] = 0;
  std::vector<double> none;
  const PhaseOutcome out =
      run_phase(t, zrow, none, allowed, ident_cols, /*phase1=*/false, iterations);
  sol.iterations = iterations;
  if (out == PhaseOutcome::unbounded) {
    sol.status = Status::unbounded;
    return sol;
  }

  // primal values
  std::vector<double> colval(static_cast<std::size_t>(form.num_cols), 0.0);
  for (int r = 0; r < t.m; ++r) {
    colval[static_cast<std::size_t>(t.basic[static_cast<std::size_t>(r)])] =
        t.b[static_cast<std::size_t>(r)];
  }
  for (std::size_t v = 0; v < nvars; ++v) {
    const int c0 = form.var_col[v];
    sol.x[v] = colval[static_cast<std::size_t>(c0)];
    if (form.var_free[v]) sol.x[v] -= colval[static_cast<std::size_t>(c0) + 1];
  }
  double obj = model.objective_constant;
  for (std::size_t v = 0; v < nvars; ++v) obj += model.objective[v] * sol.x[v];
  sol.objective = obj;

  // primal self-check over the original rows
  double perr = 0.0;
  for (const auto& row : model.rows) {
    double lhs = 0.0;
    for (std::size_t v = 0; v < nvars; ++v) lhs += row.coeffs[v] * sol.x[v];
    perr = std::max(perr, row.relation == Relation::eq ? std::abs(lhs - row.rhs)
                                                       : std::max(0.0, lhs - row.rhs));
  }
  for (std::size_t v = 0; v < nvars; ++v) {
    if (!(v < model.free_vars.size() && model.free_vars[v])) {
      perr = std::max(perr, -sol.x[v]);
    }
  }
  sol.primal_error = perr;

  // dual reconstruction: y_i = costs of the basis applied to B^-1 e_i, read
  // off the identity column of each surviving row
  std::vector<double> y(static_cast<std::size_t>(form.num_rows), 0.0);
  std::vector<double> cb(static_cast<std::size_t>(t.m));
  for (int r = 0; r < t.m; ++r) {
    cb[static_cast<std::size_t>(r)] =
        detail::form_cost<double>(model, form, t.basic[static_cast<std::size_t>(r)]);
  }
  for (int r = 0; r < t.m; ++r) {
    const int orig = t.orig_row[static_cast<std::size_t>(r)];
    const int idc = form.identity[static_cast<std::size_t>(orig)];
    double yi = 0.0;
    for (int r2 = 0; r2 < t.m; ++r2) yi += cb[static_cast<std::size_t>(r2)] * t.row(r2)[idc];
    y[static_cast<std::size_t>(orig)] = yi;
  }
  // weak-duality check against the computational form
  double dviol = 0.0;
  std::vector<double> arow(static_cast<std::size_t>(form.num_cols));
  std::vector<double> ata(static_cast<std::size_t>(form.num_cols), 0.0);
  double dual_obj = 0.0;
  {
    double rhs = 0.0;
    for (int r = 0; r < form.num_rows; ++r) {
      detail::form_fill_row<double>(model, form, r, arow.data(), &rhs);
      const double yr = y[static_cast<std::size_t>(r)];
      dual_obj += yr * rhs;
      if (yr == 0.0) continue;
      for (int c = 0; c < form.num_cols; ++c) ata[static_cast<std::size_t>(c)] += yr * arow[c];
    }
  }
  for (int c = 0; c < form.first_artificial; ++c) {
    dviol = std::max(dviol, ata[static_cast<std::size_t>(c)] -
                                detail::form_cost<double>(model, form, c));
  }
  sol.duality_gap =
      std::max(dviol, std::abs(dual_obj - (sol.objective - model.objective_constant)));

  sol.basis.assign(t.basic.begin(), t.basic.end());
  sol.basis_rows.assign(t.orig_row.begin(), t.orig_row.end());
  sol.status = Status::optimal;
  return sol;
}

std::string dump(const Model& model) {
  std::ostringstream os;
  os.precision(17);
  auto name = [&](std::size_t v) {
    return v < model.names.size() && !model.names[v].empty() ? model.names[v]
                                                             : "x" + std::to_string(v);
  };
  os << "Minimize\n obj:";
  bool first = true;
  for (std::size_t v = 0; v < model.num_vars(); ++v) {
    const double c = model.objective[v];
    if (c == 0) continue;
    os << (first ? " " : c >= 0 ? " + " : " - ") << std::abs(c) << " " << name(v);
    if (first && c < 0) os << "  ";  // sign already printed via abs; keep simple
    first = false;
  }
  if (model.objective_constant != 0) os << " + " << model.objective_constant;
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    os << " r" << r << ":";
    bool f2 = true;
    for (std::size_t v = 0; v < model.num_vars(); ++v) {
      const double a = model.rows[r].coeffs[v];
      if (a == 0) continue;
      os << (f2 ? (a < 0 ? " -" : " ") : (a < 0 ? " - " : " + ")) << std::abs(a) << " "
         << name(v);
      f2 = false;
    }
    if (f2) os << " 0 " << name(0);
    os << (model.rows[r].relation == Relation::eq ? " = " : " <= ") << model.rows[r].rhs
       << "\n";
  }
  os << "Bounds\n";
  for (std::size_t v = 0; v < model.num_vars(); ++v) {
    if (v < model.free_vars.size() && model.free_vars[v]) os << " " << name(v) << " free\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace covsieve::lp
