#pragma once

#include <cstdint>
#include <vector>

namespace covsieve {

/// A point of a box (or of a prefix of one), with 1-based coordinate values.
using Point = std::vector<int>;

/// Finite product of coordinate sets S_1 x ... x S_n, each of size >= 2.
/// Coordinates may carry integer labels (typically the prime a coordinate
/// stands for).  Immutable after construction.
class Box {
public:
  Box() = default;
  explicit Box(std::vector<int> sizes, std::vector<int> labels = {});

  int dimension() const { return static_cast<int>(sizes_.size()); }
  int size(int coord) const { return sizes_[static_cast<std::size_t>(coord)]; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<int>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  /// Number of points; throws on 64-bit overflow.
  std::uint64_t point_count() const { return prefix_count(dimension()); }
  /// Number of points of the prefix box S_1 x ... x S_k.
  std::uint64_t prefix_count(int k) const;

  /// Mixed-radix index of a point, first coordinate least significant.  With
  /// this layout the index of (x, y) at level k is
  /// index(x) + (y - 1) * prefix_count(k - 1).
  std::uint64_t encode(const Point& p) const;
  Point decode(std::uint64_t index, int level) const;
  /// Decode into a caller-provided buffer of length `level`.
  void decode_into(std::uint64_t index, int level, int* out) const;

  Box prefix(int k) const;

  bool operator==(const Box&) const = default;

private:
  std::vector<int> sizes_;
  std::vector<int> labels_;
};

}  // namespace covsieve
