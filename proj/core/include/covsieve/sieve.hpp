#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covsieve/box.hpp"
#include "covsieve/configuration.hpp"
#include "covsieve/measure.hpp"

namespace covsieve {

template <class W>
struct BasicSieveOutcome {
  BasicMeasure<W> final_measure;
  std::vector<std::pair<int, W>> removed;  // (level, removed mass) per step
  W residual_bound = W(0);                 // 1 - sum of removed masses
  bool certifies_noncover = false;         // residual bound > 0
};

/// Level-by-level measure-distortion sieve.  Hyperplanes are exposed at the
/// level of their largest fixed coordinate; at each step the measure is
/// updated so that mass moves away from the newly covered points, with the
/// distortion capped by the step's delta in [0, 1/2].
template <class W>
class BasicSieve {
public:
  BasicSieve(Box box, const Configuration& config, std::vector<W> deltas,
             BasicMeasure<W> initial)
      : box_(std::move(box)),
        deltas_(std::move(deltas)),
        measure_(std::move(initial)),
        start_(measure_.level),
        mu_(W(1)) {
    const int n = box_.dimension();
    if (static_cast<int>(deltas_.size()) != n - start_) {
      throw std::invalid_argument("BasicSieve: need one delta per level above the start");
    }
    for (const W& d : deltas_) {
      if (d < W(0) || W(2) * d > W(1)) {
        throw std::invalid_argument("BasicSieve: delta outside [0, 1/2]");
      }
    }
    new_at_.resize(static_cast<std::size_t>(n) + 1);
    for (const Hyperplane& h : config.hyperplanes()) {
      if (h.dimension() != n) {
        throw std::invalid_argument("BasicSieve: hyperplane dimension mismatch");
      }
      const auto fixed = h.fixed_coords();
      const int top = fixed.back() + 1;  // 1-based level at which h is exposed
      if (top <= start_) {
        throw std::invalid_argument(
            "BasicSieve: hyperplane fixed entirely below the start level; fold it into the "
            "initial measure instead");
      }
      new_at_[static_cast<std::size_t>(top)].push_back(h);
    }
  }

  int level() const { return measure_.level; }
  const Box& box() const { return box_; }
  const BasicMeasure<W>& measure() const { return measure_; }
  W residual_bound() const { return mu_; }
  const std::vector<std::pair<int, W>>& ledger() const { return ledger_; }
  const std::vector<Hyperplane>& exposed_at(int k) const {
    return new_at_[static_cast<std::size_t>(k)];
  }

  /// Fraction of each support fibre covered by the hyperplanes newly exposed
  /// at level k, aligned with measure().atoms.  Requires level() == k - 1.
  std::vector<W> removal_fractions(int k) const {
    if (k != measure_.level + 1 || k > box_.dimension()) {
      throw std::out_of_range("BasicSieve::removal_fractions: step out of range");
    }
    std::vector<W> alpha(measure_.atoms.size(), W(0));
    const auto& news = new_at_[static_cast<std::size_t>(k)];
    if (news.empty()) return alpha;
    const int sk = box_.size(k - 1);
    std::vector<int> pt(static_cast<std::size_t>(k - 1));
    std::vector<char> seen(static_cast<std::size_t>(sk) + 1);
    for (std::size_t a = 0; a < measure_.atoms.size(); ++a) {
      box_.decode_into(measure_.atoms[a].first, k - 1, pt.data());
      std::fill(seen.begin(), seen.end(), 0);
      int covered = 0;
      for (const Hyperplane& h : news) {
        bool match = true;
        for (int j = 0; j < k - 1; ++j) {
          if (h.is_fixed(j) && h.entry(j) != pt[static_cast<std::size_t>(j)]) {
            match = false;
            break;
          }
        }
        if (!match) continue;
        const int y = h.entry(k - 1);
        if (!seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          ++covered;
        }
      }
      alpha[a] = W(covered) / W(sk);
    }
    return alpha;
  }

  /// Advance one level; returns the mass removed at this step.
  W step(int k) {
    const std::vector<W> alpha = removal_fractions(k);
    const W delta = deltas_[static_cast<std::size_t>(k - 1 - start_)];
    const int sk = box_.size(k - 1);
    const std::uint64_t below = box_.prefix_count(k - 1);
    const auto& news = new_at_[static_cast<std::size_t>(k)];

    // Pr_k(B_k) = sum_x Pr_{k-1}(x) * max{0, (alpha - delta) / (1 - delta)}
    W removed = W(0);
    for (std::size_t a = 0; a < measure_.atoms.size(); ++a) {
      if (alpha[a] > delta) {
        removed += measure_.atoms[a].second * (alpha[a] - delta) / (W(1) - delta);
      }
    }

    std::vector<std::pair<std::uint64_t, W>> next;
    next.reserve(measure_.atoms.size() * static_cast<std::size_t>(sk) / 2);
    std::vector<int> pt(static_cast<std::size_t>(k - 1));
    std::vector<char> covered_y(static_cast<std::size_t>(sk) + 1);
    for (std::size_t a = 0; a < measure_.atoms.size(); ++a) {
      const auto [xidx, xw] = measure_.atoms[a];
      const W al = alpha[a];
      const W fibre_w = xw / W(sk);
      // factors of the two-case update: zero the covered part when the
      // removal fraction is at most delta, otherwise cap the distortion
      W on_covered, off_covered;
      if (al == W(0)) {
        on_covered = W(0);
        off_covered = W(1);
      } else if (al <= delta) {
        on_covered = W(0);
        off_covered = W(1) / (W(1) - al);
      } else {
        on_covered = (al - delta) / (al * (W(1) - delta));
        off_covered = al == W(1) ? W(0) : std::min(W(1) / (W(1) - al), W(1) / (W(1) - delta));
      }
      std::fill(covered_y.begin(), covered_y.end(), 0);
      if (!news.empty() && al > W(0)) {
        box_.decode_into(xidx, k - 1, pt.data());
        for (const Hyperplane& h : news) {
          bool match = true;
          for (int j = 0; j < k - 1; ++j) {
            if (h.is_fixed(j) && h.entry(j) != pt[static_cast<std::size_t>(j)]) {
              match = false;
              break;
            }
          }
          if (match) covered_y[static_cast<std::size_t>(h.entry(k - 1))] = 1;
        }
      }
      for (int y = 1; y <= sk; ++y) {
        const W f = covered_y[static_cast<std::size_t>(y)] ? on_covered : off_covered;
        if (f == W(0)) continue;
        next.emplace_back(xidx + static_cast<std::uint64_t>(y - 1) * below, fibre_w * f);
      }
    }
    std::sort(next.begin(), next.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    measure_.atoms = std::move(next);
    measure_.level = k;
    mu_ -= removed;
    ledger_.emplace_back(k, removed);
    return removed;
  }

  BasicSieveOutcome<W> run() {
    while (measure_.level < box_.dimension()) step(measure_.level + 1);
    BasicSieveOutcome<W> out;
    out.final_measure = measure_;
    out.removed = ledger_;
    out.residual_bound = mu_;
    out.certifies_noncover = mu_ > W(0);
    return out;
  }

private:
  Box box_;
  std::vector<std::vector<Hyperplane>> new_at_;  // hyperplanes by exposure level
  std::vector<W> deltas_;
  BasicMeasure<W> measure_;
  std::vector<std::pair<int, W>> ledger_;
  int start_;
  W mu_;
};

using Sieve = BasicSieve<double>;
using SieveOutcome = BasicSieveOutcome<double>;

/// Uniform-measure driver: starts from the uniform measure on the uncovered
/// part of the prefix box Q_a and runs the sieve to the last level.
template <class W>
BasicSieveOutcome<W> run_sieve(const Box& box, const Configuration& config,
                               const std::vector<W>& deltas, int start_level) {
  std::vector<std::uint64_t> support;
  const std::uint64_t pc = box.prefix_count(start_level);
  if (start_level == 0) {
    support.push_back(0);
  } else {
    // uncovered points of the prefix box under the hyperplanes fixed within it
    std::vector<const Hyperplane*> low;
    for (const Hyperplane& h : config.hyperplanes()) {
      if (h.fixed_coords().back() < start_level) low.push_back(&h);
    }
    std::vector<int> pt(static_cast<std::size_t>(start_level));
    for (std::uint64_t i = 0; i < pc; ++i) {
      box.decode_into(i, start_level, pt.data());
      bool covered = false;
      for (const Hyperplane* h : low) {
        bool match = true;
        for (int j = 0; j < start_level; ++j) {
          if (h->is_fixed(j) && h->entry(j) != pt[static_cast<std::size_t>(j)]) {
            match = false;
            break;
          }
        }
        if (match) {
          covered = true;
          break;
        }
      }
      if (!covered) support.push_back(i);
    }
    if (support.empty()) {
      throw std::runtime_error("run_sieve: the prefix box is already covered");
    }
  }
  Configuration upper;
  for (const Hyperplane& h : config.hyperplanes()) {
    if (h.fixed_coords().back() >= start_level) upper.insert(h);
  }
  BasicSieve<W> sieve(box, upper, deltas,
                      BasicMeasure<W>::uniform_on(start_level, std::move(support)));
  return sieve.run();
}

}  // namespace covsieve
