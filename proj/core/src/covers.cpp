#include "covsieve/covers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace covsieve::covers {

namespace {

std::int64_t mod_pos(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Translation ap_to_hyperplanes(const APSystem& system, const std::vector<int>& primes) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (primes[i] < 3 || primes[i] % 2 == 0) {
      throw std::invalid_argument("ap_to_hyperplanes: primes must be odd");
    }
    if (i > 0 && primes[i] <= primes[i - 1]) {
      throw std::invalid_argument("ap_to_hyperplanes: primes must be strictly increasing");
    }
  }
  Translation out;
  out.box = Box(primes);
  for (const APEntry& e : system.entries) {
    if (e.modulus < 2) throw std::invalid_argument("ap_to_hyperplanes: modulus must be >= 2");
    std::int64_t rest = e.modulus;
    std::vector<int> entries(primes.size(), Hyperplane::kFree);
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const auto p = static_cast<std::int64_t>(primes[i]);
      if (rest % p != 0) continue;
      rest /= p;
      if (rest % p == 0) {
        throw std::invalid_argument("ap_to_hyperplanes: modulus " + std::to_string(e.modulus) +
                                    " is not squarefree");
      }
      const std::int64_t r = mod_pos(e.residue, p);
      entries[i] = r == 0 ? static_cast<int>(p) : static_cast<int>(r);
    }
    if (rest != 1) {
      throw std::invalid_argument("ap_to_hyperplanes: modulus " + std::to_string(e.modulus) +
                                  " has a prime factor outside the given list");
    }
    out.config.insert(Hyperplane(std::move(entries)));
  }
  return out;
}

APSystem hyperplanes_to_ap(const Configuration& config, const std::vector<int>& primes) {
  APSystem out;
  for (const Hyperplane& h : config.hyperplanes()) {
    if (h.dimension() != static_cast<int>(primes.size())) {
      throw std::invalid_argument("hyperplanes_to_ap: dimension mismatch");
    }
    // iterative CRT over the fixed coordinates
    __int128 modulus = 1;
    __int128 residue = 0;
    for (int i = 0; i < h.dimension(); ++i) {
      if (!h.is_fixed(i)) continue;
      const auto p = static_cast<std::int64_t>(primes[static_cast<std::size_t>(i)]);
      const std::int64_t r = h.entry(i) == p ? 0 : h.entry(i);
      // find t with residue + modulus * t == r (mod p)
      std::int64_t m_mod = static_cast<std::int64_t>(modulus % p);
      std::int64_t need = mod_pos(r - static_cast<std::int64_t>(residue % p), p);
      std::int64_t t = 0;
      for (; t < p; ++t) {
        if (mod_pos(m_mod * t, p) == need) break;
      }
      residue += modulus * t;
      modulus *= p;
      if (modulus > static_cast<__int128>(std::int64_t{1} << 62)) {
        throw std::overflow_error("hyperplanes_to_ap: modulus exceeds 64 bits");
      }
    }
    out.entries.push_back(
        APEntry{static_cast<std::int64_t>(residue), static_cast<std::int64_t>(modulus)});
  }
  return out;
}

GreedyResult greedy_cover(const Box& box, std::uint64_t cap) {
  const std::uint64_t total = box.point_count();
  if (total > cap) {
    throw std::length_error("greedy_cover: box has " + std::to_string(total) +
                            " points, cap is " + std::to_string(cap));
  }
  const int n = box.dimension();
  if (n > 63) throw std::length_error("greedy_cover: dimension cap is 63");

  GreedyResult out;
  out.hypothesis_lhs = 1.0;
  for (int i = 0; i < n; ++i) out.hypothesis_lhs *= 1.0 + 1.0 / box.size(i);
  out.hypothesis_rhs = static_cast<double>(n) * std::log(static_cast<double>(n));
  out.hypothesis_holds = n >= 3 && out.hypothesis_lhs >= out.hypothesis_rhs;

  std::vector<char> uncovered(total, 1);
  std::uint64_t remaining = total;

  // fixed sets by increasing cardinality, colex within a cardinality
  std::vector<std::uint64_t> subsets;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) subsets.push_back(m);
  std::sort(subsets.begin(), subsets.end(), [](std::uint64_t a, std::uint64_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });

  std::vector<int> digits(static_cast<std::size_t>(n));
  for (std::uint64_t fmask : subsets) {
    if (remaining == 0) break;
    std::vector<int> coords;
    std::uint64_t cells = 1;
    for (int i = 0; i < n; ++i) {
      if (fmask >> i & 1) {
        coords.push_back(i);
        cells *= static_cast<std::uint64_t>(box.size(i));
      }
    }
    // count uncovered points per candidate hyperplane; the projection index
    // is big-endian in coordinate order so that index order is the
    // lexicographic order of the value tuples
    std::vector<std::uint64_t> count(cells, 0);
    std::fill(digits.begin(), digits.end(), 1);
    for (std::uint64_t id = 0; id < total; ++id) {
      if (uncovered[id]) {
        std::uint64_t proj = 0;
        for (int c : coords) {
          proj = proj * static_cast<std::uint64_t>(box.size(c)) +
                 static_cast<std::uint64_t>(digits[static_cast<std::size_t>(c)] - 1);
        }
        ++count[proj];
      }
      for (int i = 0; i < n; ++i) {  // little-endian odometer matches encode()
        auto& v = digits[static_cast<std::size_t>(i)];
        if (v < box.size(i)) {
          ++v;
          break;
        }
        v = 1;
      }
    }
    std::uint64_t best = 0, best_proj = 0;
    for (std::uint64_t p = 0; p < cells; ++p) {
      if (count[p] > best) {
        best = count[p];
        best_proj = p;
      }
    }
    if (best == 0) continue;  // only possible once everything is covered

    // averaging bound: some hyperplane in the partition covers its share
    if (best * cells < remaining) {
      throw std::logic_error("greedy_cover: averaging bound violated");
    }

    std::vector<int> entries(static_cast<std::size_t>(n), Hyperplane::kFree);
    std::uint64_t rem = best_proj;
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
      const auto s = static_cast<std::uint64_t>(box.size(*it));
      entries[static_cast<std::size_t>(*it)] = static_cast<int>(rem % s) + 1;
      rem /= s;
    }
    Hyperplane chosen(std::move(entries));

    // mark the chosen hyperplane's points covered
    std::uint64_t newly = 0;
    std::uint64_t base = 0;
    std::uint64_t stride = 1;
    std::vector<std::pair<std::uint64_t, int>> free_strides;
    for (int i = 0; i < n; ++i) {
      if (chosen.is_fixed(i)) {
        base += static_cast<std::uint64_t>(chosen.entry(i) - 1) * stride;
      } else {
        free_strides.emplace_back(stride, box.size(i));
      }
      stride *= static_cast<std::uint64_t>(box.size(i));
    }
    std::vector<int> odo(free_strides.size(), 0);
    for (;;) {
      std::uint64_t id = base;
      for (std::size_t i = 0; i < free_strides.size(); ++i) {
        id += static_cast<std::uint64_t>(odo[i]) * free_strides[i].first;
      }
      if (uncovered[id]) {
        uncovered[id] = 0;
        ++newly;
      }
      std::size_t i = 0;
      for (; i < free_strides.size(); ++i) {
        if (++odo[i] < free_strides[i].second) break;
        odo[i] = 0;
      }
      if (i == free_strides.size()) break;
    }
    out.steps.push_back(GreedyStep{fmask, chosen, newly, remaining});
    out.config.insert(std::move(chosen));
    remaining -= newly;
  }
  out.covered = remaining == 0;
  return out;
}

SharpnessResult sharpness_sequence(int cutoff, int n, std::uint64_t greedy_cap) {
  if (cutoff < 1 || n <= cutoff) {
    throw std::invalid_argument("sharpness_sequence: need n > cutoff >= 1");
  }
  SharpnessResult out;
  out.sizes.resize(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    int q = 2;
    if (k > cutoff) {
      const double f = (1.0 - 2.0 / std::log(static_cast<double>(k))) * static_cast<double>(k);
      q = std::max(2, static_cast<int>(std::floor(f)));
    }
    out.sizes[static_cast<std::size_t>(k - 1)] = q;
  }
  out.product_lhs = 1.0;
  for (int k = cutoff + 1; k <= n; ++k) {
    out.product_lhs *= 1.0 + 1.0 / out.sizes[static_cast<std::size_t>(k - 1)];
  }
  const auto tail = static_cast<double>(n - cutoff);
  out.rhs = tail * std::log(tail);
  out.inequality_holds = out.product_lhs >= out.rhs;
  out.lemma_applies = out.inequality_holds && n - cutoff >= 3;

  std::vector<int> tail_sizes(out.sizes.begin() + cutoff, out.sizes.end());
  std::uint64_t points = 1;
  bool feasible = true;
  for (int q : tail_sizes) {
    if (points > greedy_cap / static_cast<std::uint64_t>(q)) {
      feasible = false;
      break;
    }
    points *= static_cast<std::uint64_t>(q);
  }
  if (feasible) {
    out.cover = greedy_cover(Box(tail_sizes), greedy_cap);
  }
  return out;
}

}  // namespace covsieve::covers
