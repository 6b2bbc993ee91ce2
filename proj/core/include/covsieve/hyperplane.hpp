#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covsieve/box.hpp"

namespace covsieve {

/// Axis-aligned product subset of a box: every coordinate is either fixed to
/// a single value or left free.  Entry 0 means free, any other entry is the
/// fixed 1-based value.
class Hyperplane {
public:
  static constexpr int kFree = 0;

  Hyperplane() = default;
  explicit Hyperplane(std::vector<int> entries) : entries_(std::move(entries)) {}

  int dimension() const { return static_cast<int>(entries_.size()); }
  int entry(int coord) const { return entries_[static_cast<std::size_t>(coord)]; }
  bool is_fixed(int coord) const { return entry(coord) != kFree; }
  const std::vector<int>& entries() const { return entries_; }

  /// Bit i set iff coordinate i is fixed.  Requires dimension <= 64.
  std::uint64_t fixed_mask() const;
  std::vector<int> fixed_coords() const;
  int codimension() const;

  bool contains_point(const Point& p) const;
  std::uint64_t point_count(const Box& box) const;

  bool operator==(const Hyperplane&) const = default;

private:
  std::vector<int> entries_;
};

/// Decode the positional text form used in configuration files: one character
/// per coordinate, `*` for free, `1`-`9`, then `a`-`z` for 10-35 and `A`-`Z`
/// for 36-61.  Values are checked against the box's coordinate sizes.
Hyperplane parse_hyperplane(const std::string& text, const Box& box);
std::string format_hyperplane(const Hyperplane& h);

/// Parallel means identical fixed-coordinate sets.  Throws on dimension
/// mismatch.
bool is_parallel(const Hyperplane& a, const Hyperplane& b);

/// Intersection of two hyperplanes on the same box: empty when a common fixed
/// coordinate disagrees, otherwise the hyperplane fixing the union of the two
/// fixed sets.
std::optional<Hyperplane> intersect(const Hyperplane& a, const Hyperplane& b);

/// Keep only the fixed entries whose coordinate bit is set in `coords`.
Hyperplane restrict_to(const Hyperplane& a, std::uint64_t coords);

/// a is a subset of b iff b fixes a subset of a's coordinates and the values
/// agree there.
bool is_subset(const Hyperplane& a, const Hyperplane& b);

}  // namespace covsieve
