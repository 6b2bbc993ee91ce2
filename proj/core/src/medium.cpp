#include "covsieve/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "covsieve/primes.hpp"
#include "covsieve/util.hpp"

namespace covsieve::medium {

namespace {

constexpr double kInfeasiblePenalty = 1e9;

double check_delta(double d) {
  if (!(d > 0.0) || d > 0.5) {
    throw std::domain_error("medium: delta must lie in (0, 1/2]");
  }
  return d;
}

/// Ratio with a graded penalty when the residual goes nonpositive, so the
/// coordinate descent can climb back into the feasible region.
double penalized_ratio(double c1, double c3, std::span<const double> deltas,
                       std::span<const int> sizes) {
  State s{c1, c3, 1.0};
  for (std::size_t k = 0; k < sizes.size(); ++k) advance(s, sizes[k], deltas[k]);
  if (s.residual <= 0.0) return kInfeasiblePenalty * (1.0 - s.residual);
  return s.c3 / s.residual;
}

}  // namespace

std::vector<int> default_sizes() {
  std::vector<int> s;
  s.reserve(kPrimes.size());
  for (int p : kPrimes) s.push_back(p - 1);
  return s;
}

bool advance(State& state, int size, double delta) {
  check_delta(delta);
  const double s2 = static_cast<double>(size) * static_cast<double>(size);
  state.residual -= (state.c3 - 2.0 * state.c1 + 1.0) / (4.0 * delta * (1.0 - delta) * s2);
  const double grow = 1.0 / ((1.0 - delta) * static_cast<double>(size));
  state.c1 *= 1.0 + grow;
  state.c3 *= 1.0 + 3.0 * grow;
  return state.residual > 0.0;
}

RunResult run_levels(double c1, double c3, std::span<const double> deltas,
                     std::span<const int> sizes) {
  if (deltas.size() != sizes.size()) {
    throw std::invalid_argument("run_levels: one delta per level");
  }
  RunResult out;
  out.state = State{c1, c3, 1.0};
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    advance(out.state, sizes[k], deltas[k]);
  }
  out.residual_positive = out.state.residual > 0.0;
  out.ratio = out.residual_positive ? out.state.c3 / out.state.residual
                                    : std::numeric_limits<double>::infinity();
  return out;
}

OptimizeResult optimize_deltas(double c1, double c3, const OptimizeOptions& options,
                               std::span<const int> sizes) {
  const std::vector<int> defaults = sizes.empty() ? default_sizes() : std::vector<int>{};
  if (sizes.empty()) sizes = defaults;

  OptimizeResult out;
  out.deltas.resize(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    out.deltas[k] = std::min(0.5, options.init_scale / static_cast<double>(sizes[k]));
  }

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = penalized_ratio(c1, c3, out.deltas, sizes);
  for (out.passes = 1; out.passes <= options.max_passes; ++out.passes) {
    const double before = best;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      auto eval = [&](double d) {
        const double saved = out.deltas[k];
        out.deltas[k] = d;
        const double r = penalized_ratio(c1, c3, out.deltas, sizes);
        out.deltas[k] = saved;
        return r;
      };
      // coarse scan brackets the minimum, golden-section refines it
      double scan_best = std::numeric_limits<double>::infinity();
      double scan_at = out.deltas[k];
      const int pts = std::max(4, options.scan_points);
      for (int j = 1; j <= pts; ++j) {
        const double d = 0.5 * static_cast<double>(j) / static_cast<double>(pts);
        const double r = eval(d);
        if (r < scan_best) {
          scan_best = r;
          scan_at = d;
        }
      }
      double lo = std::max(options.tol, scan_at - 0.5 / static_cast<double>(pts));
      double hi = std::min(0.5, scan_at + 0.5 / static_cast<double>(pts));
      double c = hi - golden * (hi - lo);
      double d = lo + golden * (hi - lo);
      double fc = eval(c);
      double fd = eval(d);
      while (hi - lo > options.tol) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - golden * (hi - lo);
          fc = eval(c);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + golden * (hi - lo);
          fd = eval(d);
        }
      }
      const double mid = 0.5 * (lo + hi);
      const double fmid = eval(mid);
      if (fmid < best) {
        out.deltas[k] = mid;
        best = fmid;
      } else if (scan_best < best) {
        out.deltas[k] = scan_at;
        best = scan_best;
      }
    }
    if (before - best < options.tol * std::max(1.0, std::abs(before))) break;
  }

  const RunResult final = run_levels(c1, c3, out.deltas, sizes);
  out.feasible = final.residual_positive;
  out.residual = final.state.residual;
  out.ratio = final.ratio;
  return out;
}

SweepResult sweep(const SweepOptions& options) {
  const std::int64_t denom = options.grid_denom;
  if (denom < 2) throw std::domain_error("sweep: grid denominator too small");
  const std::int64_t begin = denom;      // c1 = 1
  const std::int64_t end = 5 * denom;    // c1 = 5
  const auto count = static_cast<std::size_t>(end - begin + 1);
  const std::vector<int> sizes = default_sizes();

  std::vector<SweepRow> rows(count);
  parallel_for(count, options.workers, [&](std::size_t n) {
    const std::int64_t i = begin + static_cast<std::int64_t>(n);
    SweepRow row;
    row.index = i;
    row.u = static_cast<double>(i) / static_cast<double>(denom);
    row.v = options.region_bound +
            3.0 * static_cast<double>(i + 1) / (4.0 * static_cast<double>(denom));
    const OptimizeResult opt = optimize_deltas(row.u, row.v, options.optimize, sizes);
    row.ratio = opt.ratio;
    row.residual = opt.residual;
    row.deltas = opt.deltas;
    rows[n] = std::move(row);
  });

  SweepResult out;
  out.grid_points = count;
  out.all_residual_positive = true;
  out.min_residual = std::numeric_limits<double>::infinity();
  for (const SweepRow& row : rows) {
    if (!(row.residual > 0.0)) out.all_residual_positive = false;
    out.min_residual = std::min(out.min_residual, row.residual);
    if (row.ratio > out.max_ratio) {
      out.max_ratio = row.ratio;
      out.argmax_index = row.index;
    }
  }
  if (options.keep_ledger) out.ledger = std::move(rows);
  return out;
}

MonotonicityReport monotonicity_probe(int samples, std::uint64_t seed,
                                      std::span<const double> deltas) {
  const std::vector<int> sizes = default_sizes();
  std::vector<double> ds(deltas.begin(), deltas.end());
  if (ds.empty()) ds.assign(sizes.size(), 0.25);
  if (ds.size() != sizes.size()) {
    throw std::invalid_argument("monotonicity_probe: delta count mismatch");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u1(1.0, 5.0);
  std::uniform_real_distribution<double> bump(1e-4, 0.1);

  MonotonicityReport rep;
  for (int s = 0; s < samples; ++s) {
    const double c1 = u1(rng);
    // stay inside the admissible region c3 - 1 >= 3 (c1 - 1)
    const double c3 = 3.0 * (c1 - 1.0) + 1.0 + bump(rng) * 20.0;
    const double e3 = bump(rng);
    const double e1 = bump(rng);
    const RunResult base = run_levels(c1, c3, ds, sizes);
    const RunResult up3 = run_levels(c1, c3 + e3, ds, sizes);
    const RunResult up1 = run_levels(c1 + e1, c3, ds, sizes);
    ++rep.samples;
    const bool ok = up3.state.c3 > base.state.c3 &&
                    up3.state.residual < base.state.residual &&
                    up1.state.residual > base.state.residual;
    if (!ok) ++rep.violations;
  }
  return rep;
}

TerminationVerdict termination_criteria(double f21, double threshold) {
  TerminationVerdict v;
  v.threshold = threshold;
  v.certified = f21 <= v.threshold;
  const double k = 21.0;
  const double logk = std::log(k);
  v.large_index_rhs = (logk + std::log(logk) - 3.0) * (logk + std::log(logk) - 3.0) * k;
  v.large_index_ok = f21 <= v.large_index_rhs;
  return v;
}

double propagate_factor(int from_index, int to_index, double delta) {
  check_delta(delta);
  if (to_index < from_index) {
    throw std::invalid_argument("propagate_factor: bad index range");
  }
  const std::vector<std::int64_t> primes = first_primes(to_index);
  double f = 1.0;
  for (int i = from_index + 1; i <= to_index; ++i) {
    const auto p = static_cast<double>(primes[static_cast<std::size_t>(i - 1)]);
    f *= 1.0 + (3.0 * p - 1.0) / ((1.0 - delta) * (p - 1.0) * (p - 1.0));
  }
  return f;
}

bool propagation_step_consistent(int prime, double delta) {
  check_delta(delta);
  const auto p = static_cast<double>(prime);
  return 1.0 + 3.0 / ((1.0 - delta) * p) <=
         1.0 + (3.0 * p - 1.0) / ((1.0 - delta) * (p - 1.0) * (p - 1.0));
}

}  // namespace covsieve::medium
