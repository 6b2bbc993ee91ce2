#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "covsieve/box.hpp"
#include "covsieve/hyperplane.hpp"

namespace covsieve {

/// A set of pairwise non-parallel hyperplanes, one per fixed-coordinate set,
/// kept sorted by fixed set in colexicographic order (i.e. numerically by
/// fixed mask).
class Configuration {
public:
  Configuration() = default;

  /// Throws if the hyperplane has an empty fixed set or a hyperplane with the
  /// same fixed set is already present.
  void insert(Hyperplane h);

  const Hyperplane* find(std::uint64_t fixed_mask) const;
  const std::vector<Hyperplane>& hyperplanes() const { return planes_; }
  std::size_t size() const { return planes_.size(); }
  bool empty() const { return planes_.empty(); }

  /// First pair (i, j) with planes()[i] contained in planes()[j], if any.
  std::optional<std::pair<int, int>> containment_violation() const;
  bool is_antichain() const { return !containment_violation().has_value(); }

  bool operator==(const Configuration&) const = default;

private:
  std::vector<Hyperplane> planes_;  // sorted by fixed_mask()
};

struct CoverCheck {
  bool covered = false;
  std::optional<Point> witness;  // lexicographically first uncovered point
};

/// Exhaustively test whether the configuration covers the box.  Throws when
/// the box has more than `cap` points.
CoverCheck check_covers(const Configuration& config, const Box& box,
                        std::uint64_t cap = 100'000'000);

/// One configuration per line, comma-separated hyperplane strings.
Configuration parse_configuration(const std::string& line, const Box& box);
std::string format_configuration(const Configuration& config);

/// Reads a configuration file: `#` starts a comment, blank lines are skipped.
std::vector<Configuration> read_configurations(std::istream& in, const Box& box);

}  // namespace covsieve
