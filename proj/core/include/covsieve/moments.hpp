#pragma once

#include <cstdint>
#include <vector>

#include "covsieve/box.hpp"
#include "covsieve/configuration.hpp"
#include "covsieve/measure.hpp"

namespace covsieve {

/// Summary of an initial measure on a prefix box Q_a together with the
/// distortion schedule and coordinate sizes of the levels above: everything
/// the first/second-moment bounds depend on.
///
/// max_mass[I] (index = subset mask of the first `prefix_len` coordinates) is
/// the largest mass any hyperplane with fixed set I carries under the initial
/// measure; max_mass[0] = 1.
struct MomentProfile {
  int prefix_len = 0;             // a
  std::vector<double> max_mass;   // 2^a entries
  std::vector<double> deltas;     // for levels a+1 .. n
  std::vector<int> sizes;         // |S_{a+1}| .. |S_n|

  int last_level() const { return prefix_len + static_cast<int>(sizes.size()); }
  double delta(int level) const;  // a < level <= n
  int size(int level) const;

  /// Product of 1 / ((1 - delta_j) |S_j|) over the given levels (all in
  /// (a, n]); 1 for the empty set.
  double free_factor(const std::vector<int>& levels) const;

  /// The weighted subset aggregate
  ///   sum_I max_mass[I] x^|I| * prod_{j=a+1..level} (1 + x / ((1-delta_j)|S_j|)).
  double mass_poly(int level, double x) const;
};

/// Largest hyperplane mass per fixed set under a measure at level a <= 6.
std::vector<double> max_mass_table(const Box& box, const Measure& initial);

struct MomentBoundEntry {
  double m1 = 0;         // bound on E[alpha]
  double m2 = 0;         // bound on E[alpha^2]
  double m2_codim2 = 0;  // sharper E[alpha^2] bound; valid only without codim-1 hyperplanes
  bool has_codim2 = false;
};

/// First/second moment bounds at a level from the profile.  `codim1_free`
/// additionally computes the sharper second-moment bound and requires every
/// listed size to be at least 3.
MomentBoundEntry moment_bounds(const MomentProfile& profile, int level, bool codim1_free);

/// Exact t-th moment of the removal fraction at step `level` under the given
/// measure at level-1 (brute force; small boxes only).
double brute_moment(const Box& box, const Configuration& config, const Measure& prev, int level,
                    int t);

/// 1 - sum over steps of min{ M1, M2 / (4 delta (1-delta)) }; positive values
/// certify that the configuration cannot cover the box.  A zero delta forces
/// the M1 branch.
double uncovered_margin(const std::vector<MomentBoundEntry>& bounds,
                        const std::vector<double>& deltas);

/// Non-coverability certificate for boxes with linearly growing coordinate
/// sizes: with delta = eps/6 and a uniform start, sums the second-moment
/// bound terms c_{k-1}(3) / (|S_k|^2 4 delta (1-delta)) over levels above the
/// cutoff.  The hypothesis |S_k| > (3+eps) k for k >= min_index is checked.
struct GmmOptions {
  std::vector<std::int64_t> sizes;  // q_1 .. q_n
  double eps = 0;
  int min_index = 1;  // hypothesis holds from this index on
  int cutoff = 0;     // C: hyperplanes fixed within [C] are assumed absent
};

struct GmmResult {
  double sum = 0;
  bool certified = false;            // sum < 1
  std::vector<double> partial_sums;  // running sum after each level > cutoff
};

GmmResult gmm_check(const GmmOptions& options);

/// Smallest cutoff C <= n for which the certificate sum drops below 1, or -1
/// if none works.
int gmm_smallest_cutoff(const std::vector<std::int64_t>& sizes, double eps, int min_index);

}  // namespace covsieve
