#include "covsieve/moments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "covsieve/sieve.hpp"

namespace covsieve {

double MomentProfile::delta(int level) const {
  if (level <= prefix_len || level > last_level()) {
    throw std::out_of_range("MomentProfile::delta: level out of range");
  }
  return deltas[static_cast<std::size_t>(level - prefix_len - 1)];
}

int MomentProfile::size(int level) const {
  if (level <= prefix_len || level > last_level()) {
    throw std::out_of_range("MomentProfile::size: level out of range");
  }
  return sizes[static_cast<std::size_t>(level - prefix_len - 1)];
}

double MomentProfile::free_factor(const std::vector<int>& levels) const {
  double f = 1.0;
  for (int j : levels) {
    const double d = delta(j);
    if (d < 0 || d > 0.5) throw std::domain_error("MomentProfile: delta outside [0, 1/2]");
    f /= (1.0 - d) * static_cast<double>(size(j));
  }
  return f;
}

double MomentProfile::mass_poly(int level, double x) const {
  if (level < prefix_len || level > last_level()) {
    throw std::out_of_range("MomentProfile::mass_poly: level out of range");
  }
  double prefix_sum = 0.0;
  const auto table_size = static_cast<std::uint32_t>(max_mass.size());
  for (std::uint32_t mask = 0; mask < table_size; ++mask) {
    prefix_sum += max_mass[mask] * std::pow(x, std::popcount(mask));
  }
  double prod = 1.0;
  for (int j = prefix_len + 1; j <= level; ++j) {
    prod *= 1.0 + x / ((1.0 - delta(j)) * static_cast<double>(size(j)));
  }
  return prefix_sum * prod;
}

std::vector<double> max_mass_table(const Box& box, const Measure& initial) {
  const int a = initial.level;
  if (a > 6) {
    throw std::invalid_argument("max_mass_table: prefix length capped at 6 (2^a entries)");
  }
  const auto nmask = std::uint32_t{1} << a;
  std::vector<double> table(nmask, 0.0);
  table[0] = detail::to_double(initial.total());

  // strides of the projection index per fixed set
  std::vector<int> pt(static_cast<std::size_t>(a));
  std::vector<std::vector<double>> acc(nmask);
  for (std::uint32_t mask = 1; mask < nmask; ++mask) {
    std::uint64_t cells = 1;
    for (int i = 0; i < a; ++i) {
      if (mask >> i & 1) cells *= static_cast<std::uint64_t>(box.size(i));
    }
    acc[mask].assign(cells, 0.0);
  }
  for (const auto& [idx, w] : initial.atoms) {
    box.decode_into(idx, a, pt.data());
    for (std::uint32_t mask = 1; mask < nmask; ++mask) {
      std::uint64_t proj = 0;
      std::uint64_t stride = 1;
      for (int i = 0; i < a; ++i) {
        if (mask >> i & 1) {
          proj += static_cast<std::uint64_t>(pt[static_cast<std::size_t>(i)] - 1) * stride;
          stride *= static_cast<std::uint64_t>(box.size(i));
        }
      }
      acc[mask][proj] += w;
    }
  }
  for (std::uint32_t mask = 1; mask < nmask; ++mask) {
    table[mask] = *std::max_element(acc[mask].begin(), acc[mask].end());
  }
  return table;
}

MomentBoundEntry moment_bounds(const MomentProfile& profile, int level, bool codim1_free) {
  if (level <= profile.prefix_len || level > profile.last_level()) {
    throw std::out_of_range("moment_bounds: level out of range");
  }
  if (codim1_free) {
    for (int s : profile.sizes) {
      if (s < 3) {
        throw std::invalid_argument(
            "moment_bounds: the codimension-2 bound needs every size >= 3");
      }
    }
  }
  const double sk = profile.size(level);
  const double c1 = profile.mass_poly(level - 1, 1.0);
  const double c3 = profile.mass_poly(level - 1, 3.0);
  MomentBoundEntry e;
  e.m1 = c1 / sk;
  e.m2 = c3 / (sk * sk);
  if (codim1_free) {
    e.m2_codim2 = (c3 - 2.0 * c1 + 1.0) / (sk * sk);
    e.has_codim2 = true;
  }
  return e;
}

double brute_moment(const Box& box, const Configuration& config, const Measure& prev, int level,
                    int t) {
  BasicSieve<double> sieve(box, config,
                           std::vector<double>(static_cast<std::size_t>(box.dimension() - prev.level), 0.0),
                           prev);
  const std::vector<double> alpha = sieve.removal_fractions(level);
  double e = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    e += prev.atoms[i].second * std::pow(alpha[i], t);
  }
  return e;
}

double uncovered_margin(const std::vector<MomentBoundEntry>& bounds,
                        const std::vector<double>& deltas) {
  if (bounds.size() != deltas.size()) {
    throw std::invalid_argument("uncovered_margin: one delta per bound entry");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const double d = deltas[i];
    const double m2 = bounds[i].has_codim2 ? bounds[i].m2_codim2 : bounds[i].m2;
    if (d == 0.0) {
      sum += bounds[i].m1;
    } else {
      sum += std::min(bounds[i].m1, m2 / (4.0 * d * (1.0 - d)));
    }
  }
  return 1.0 - sum;
}

GmmResult gmm_check(const GmmOptions& options) {
  const int n = static_cast<int>(options.sizes.size());
  if (options.cutoff < 0 || options.cutoff > n) {
    throw std::out_of_range("gmm_check: cutoff out of range");
  }
  if (options.eps <= 0) throw std::domain_error("gmm_check: eps must be positive");
  for (int k = 1; k <= n; ++k) {
    const auto q = options.sizes[static_cast<std::size_t>(k - 1)];
    if (q < 2) throw std::domain_error("gmm_check: sizes must be >= 2");
    if (k >= options.min_index &&
        static_cast<double>(q) <= (3.0 + options.eps) * static_cast<double>(k)) {
      throw std::domain_error("gmm_check: hypothesis |S_k| > (3+eps) k fails at k = " +
                              std::to_string(k));
    }
  }
  const double delta = options.eps / 6.0;
  if (delta > 0.5) throw std::domain_error("gmm_check: eps/6 exceeds 1/2");
  const double denom_factor = 4.0 * delta * (1.0 - delta);

  GmmResult res;
  double c3 = 1.0;  // running c_{k-1}(3) with the trivial prefix (a = 0)
  double sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    const auto q = static_cast<double>(options.sizes[static_cast<std::size_t>(k - 1)]);
    if (k > options.cutoff) {
      sum += c3 / (q * q * denom_factor);
      res.partial_sums.push_back(sum);
    }
    c3 *= 1.0 + 3.0 / ((1.0 - delta) * q);
  }
  res.sum = sum;
  res.certified = sum < 1.0;
  return res;
}

int gmm_smallest_cutoff(const std::vector<std::int64_t>& sizes, double eps, int min_index) {
  const int n = static_cast<int>(sizes.size());
  // the per-level terms do not depend on the cutoff, so one pass suffices
  GmmOptions opt{sizes, eps, min_index, 0};
  const GmmResult all = gmm_check(opt);
  for (int c = 0; c <= n; ++c) {
    const double removed = c == 0 ? 0.0 : all.partial_sums[static_cast<std::size_t>(c - 1)];
    if (all.sum - removed < 1.0) return c;
  }
  return -1;
}

}  // namespace covsieve
