#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covsieve/box.hpp"
#include "covsieve/hyperplane.hpp"

namespace covsieve {

namespace detail {
inline double to_double(double x) { return x; }
template <class T>
double to_double(const T& x) {
  return static_cast<double>(x);
}
}  // namespace detail

/// A nonnegative weighting of the points of a prefix box Q_k, normally summing
/// to 1.  Stored sparsely as (encoded point, weight) pairs sorted by point.
/// When evaluated against sets living at a deeper level the measure is
/// extended uniformly on fibres.
template <class WeightT>
struct BasicMeasure {
  using Weight = WeightT;

  int level = 0;
  std::vector<std::pair<std::uint64_t, Weight>> atoms;

  static BasicMeasure uniform(const Box& box, int level) {
    const std::uint64_t n = box.prefix_count(level);
    BasicMeasure m;
    m.level = level;
    m.atoms.reserve(n);
    const Weight w = Weight(1) / Weight(static_cast<long long>(n));
    for (std::uint64_t i = 0; i < n; ++i) m.atoms.emplace_back(i, w);
    return m;
  }

  /// Uniform measure on an explicit point set (encoded indices, need not be
  /// sorted).
  static BasicMeasure uniform_on(int level, std::vector<std::uint64_t> points) {
    if (points.empty()) {
      throw std::invalid_argument("BasicMeasure::uniform_on: empty support");
    }
    std::sort(points.begin(), points.end());
    BasicMeasure m;
    m.level = level;
    m.atoms.reserve(points.size());
    const Weight w = Weight(1) / Weight(static_cast<long long>(points.size()));
    for (std::uint64_t p : points) m.atoms.emplace_back(p, w);
    return m;
  }

  Weight total() const {
    Weight sum = Weight(0);
    for (const auto& [p, w] : atoms) sum += w;
    return sum;
  }

  const Weight* weight_of(std::uint64_t point) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), point,
                               [](const auto& a, std::uint64_t p) { return a.first < p; });
    if (it != atoms.end() && it->first == point) return &it->second;
    return nullptr;
  }

  /// Mass of a hyperplane of the full box.  Fixed coordinates above the
  /// measure's level contribute the uniform fibre factor 1/|S_j|.
  Weight mass(const Box& box, const Hyperplane& h) const {
    if (h.dimension() > box.dimension()) {
      throw std::invalid_argument("BasicMeasure::mass: hyperplane deeper than box");
    }
    Weight deep_factor = Weight(1);
    for (int j = level; j < h.dimension(); ++j) {
      if (h.is_fixed(j)) deep_factor /= Weight(box.size(j));
    }
    Weight sum = Weight(0);
    std::vector<int> pt(static_cast<std::size_t>(level));
    for (const auto& [idx, w] : atoms) {
      box.decode_into(idx, level, pt.data());
      bool match = true;
      for (int j = 0; j < level && j < h.dimension(); ++j) {
        if (h.is_fixed(j) && h.entry(j) != pt[static_cast<std::size_t>(j)]) {
          match = false;
          break;
        }
      }
      if (match) sum += w;
    }
    return sum * deep_factor;
  }

  /// Mass of an explicit point set given at `point_level`.  Points shallower
  /// than the measure's level select whole fibres; deeper points receive the
  /// uniform fibre weight.
  Weight mass_points(const Box& box, int point_level, std::span<const std::uint64_t> points) const {
    if (point_level > box.dimension()) {
      throw std::out_of_range("BasicMeasure::mass_points: level deeper than the box");
    }
    Weight sum = Weight(0);
    if (point_level == level) {
      for (std::uint64_t p : points) {
        if (const Weight* w = weight_of(p)) sum += *w;
      }
    } else if (point_level < level) {
      const std::uint64_t pc = box.prefix_count(point_level);
      std::vector<std::uint64_t> sorted(points.begin(), points.end());
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (const auto& [idx, w] : atoms) {
        if (std::binary_search(sorted.begin(), sorted.end(), idx % pc)) sum += w;
      }
    } else {
      Weight fibre = Weight(1);
      for (int j = level; j < point_level; ++j) fibre /= Weight(box.size(j));
      const std::uint64_t pc = box.prefix_count(level);
      for (std::uint64_t p : points) {
        if (const Weight* w = weight_of(p % pc)) sum += *w * fibre;
      }
    }
    return sum;
  }

  /// Largest deviation of the total mass from 1, as a double.
  double normalization_error() const { return std::abs(detail::to_double(total()) - 1.0); }

  void drop_zero_atoms() {
    std::erase_if(atoms, [](const auto& a) { return a.second == Weight(0); });
  }
};

using Measure = BasicMeasure<double>;

}  // namespace covsieve
