#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace covsieve::medium {

// The sixteen primes handled one coordinate at a time after the small-prime
// stage; each coordinate set has p - 1 values after the codimension-1
// removal.
inline constexpr std::array<int, 16> kPrimes{13, 17, 19, 23, 29, 31, 37, 41,
                                             43, 47, 53, 59, 61, 67, 71, 73};

std::vector<int> default_sizes();  // p - 1 for each prime

/// Running aggregates of the level recursion: the weighted subset sums at
/// x = 1 and x = 3 and the lower bound on the residual mass.
struct State {
  double c1 = 1;
  double c3 = 1;
  double residual = 1;  // lower bound on the uncovered mass
};

/// One level of the recursion: subtract the sharpened second-moment removal
/// bound from the residual, then grow both aggregates.  Flags (by return
/// value) whether the residual stayed positive.
bool advance(State& state, int size, double delta);

struct RunResult {
  State state;
  double ratio = 0;  // c3 / residual after the last level
  bool residual_positive = false;
};

RunResult run_levels(double c1, double c3, std::span<const double> deltas,
                     std::span<const int> sizes);

struct OptimizeOptions {
  double tol = 1e-9;        // per-coordinate golden-section tolerance
  int max_passes = 100;     // coordinate-descent sweeps
  double init_scale = 3.0;  // delta starts at min(1/2, init_scale / size)
  int scan_points = 32;     // coarse bracketing scan per coordinate
};

struct OptimizeResult {
  std::vector<double> deltas;
  double ratio = 0;
  double residual = 0;
  bool feasible = false;  // residual stayed positive at the optimum
  int passes = 0;
};

/// Coordinate-wise minimization of the final ratio over the distortion
/// parameters, each in (0, 1/2]: a coarse scan brackets the per-coordinate
/// minimum, golden-section search refines it, and sweeps repeat until the
/// relative improvement drops below the tolerance.
OptimizeResult optimize_deltas(double c1, double c3, const OptimizeOptions& options = {},
                               std::span<const int> sizes = {});

struct SweepOptions {
  double region_bound = 9.019;       // the admissible region is c3 - 3 c1/4 <= bound
  std::int64_t grid_denom = 10'000;  // grid step is 1 / grid_denom
  int workers = 0;
  bool keep_ledger = true;
  OptimizeOptions optimize;
};

struct SweepRow {
  std::int64_t index = 0;
  double u = 0;  // c1 at the dominating grid point
  double v = 0;  // c3 at the dominating grid point
  double ratio = 0;
  double residual = 0;
  std::vector<double> deltas;
};

struct SweepResult {
  double max_ratio = 0;
  std::int64_t argmax_index = 0;
  double min_residual = 0;
  bool all_residual_positive = false;
  std::uint64_t grid_points = 0;
  std::vector<SweepRow> ledger;  // in index order when kept
};

/// Optimize the distortion schedule at every dominating grid point
/// (u, v) = (i/denom, bound + 3(i+1)/(4 denom)) for i in [denom, 5 denom].
SweepResult sweep(const SweepOptions& options = {});

struct MonotonicityReport {
  int samples = 0;
  int violations = 0;
};

/// Sample check of the monotonicity used by the domination argument: the
/// final c3 grows with the initial c3, and the residual grows with the
/// initial c1 and shrinks with the initial c3.
MonotonicityReport monotonicity_probe(int samples, std::uint64_t seed,
                                      std::span<const double> deltas);

struct TerminationVerdict {
  bool certified = false;       // ratio within the imported threshold
  double threshold = 138.877;   // imported termination constant, used as given
  double large_index_rhs = 0;   // (log k + log log k - 3)^2 k at k = 21
  bool large_index_ok = false;  // whether the direct large-index test passes at 21
};

TerminationVerdict termination_criteria(double f21, double threshold = 138.877);

/// Ratio propagation factor for levels beyond 73: multiplies
/// 1 + (3p - 1) / ((1 - delta)(p - 1)^2) over the primes indexed
/// (from_index, to_index] with a constant delta.
double propagate_factor(int from_index, int to_index, double delta);

/// Per-level consistency inequality behind the propagation factor:
/// 1 + 3/((1-d)p) <= 1 + (3p-1)/((1-d)(p-1)^2).
bool propagation_step_consistent(int prime, double delta);

}  // namespace covsieve::medium
