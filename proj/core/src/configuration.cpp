#include "covsieve/configuration.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace covsieve {

void Configuration::insert(Hyperplane h) {
  const std::uint64_t mask = h.fixed_mask();
  if (mask == 0) {
    throw std::invalid_argument("Configuration::insert: empty fixed set");
  }
  auto pos = std::lower_bound(planes_.begin(), planes_.end(), mask,
                              [](const Hyperplane& p, std::uint64_t m) {
                                return p.fixed_mask() < m;
                              });
  if (pos != planes_.end() && pos->fixed_mask() == mask) {
    throw std::invalid_argument("Configuration::insert: parallel to an existing hyperplane");
  }
  if (!planes_.empty() && planes_.front().dimension() != h.dimension()) {
    throw std::invalid_argument("Configuration::insert: dimension mismatch");
  }
  planes_.insert(pos, std::move(h));
}

const Hyperplane* Configuration::find(std::uint64_t fixed_mask) const {
  auto pos = std::lower_bound(planes_.begin(), planes_.end(), fixed_mask,
                              [](const Hyperplane& p, std::uint64_t m) {
                                return p.fixed_mask() < m;
                              });
  if (pos != planes_.end() && pos->fixed_mask() == fixed_mask) return &*pos;
  return nullptr;
}

std::optional<std::pair<int, int>> Configuration::containment_violation() const {
  const int n = static_cast<int>(planes_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (is_subset(planes_[static_cast<std::size_t>(i)], planes_[static_cast<std::size_t>(j)])) {
        return std::make_pair(i, j);
      }
    }
  }
  return std::nullopt;
}

CoverCheck check_covers(const Configuration& config, const Box& box, std::uint64_t cap) {
  const std::uint64_t total = box.point_count();
  if (total > cap) {
    throw std::length_error("check_covers: box has " + std::to_string(total) +
                            " points, cap is " + std::to_string(cap));
  }
  const int n = box.dimension();
  Point p(static_cast<std::size_t>(n), 1);
  for (std::uint64_t it = 0; it < total; ++it) {
    bool covered = false;
    for (const Hyperplane& h : config.hyperplanes()) {
      if (h.contains_point(p)) {
        covered = true;
        break;
      }
    }
    if (!covered) return CoverCheck{false, p};
    // advance in lexicographic order: last coordinate fastest
    for (int i = n - 1; i >= 0; --i) {
      auto& v = p[static_cast<std::size_t>(i)];
      if (v < box.size(i)) {
        ++v;
        break;
      }
      v = 1;
    }
  }
  return CoverCheck{true, std::nullopt};
}

Configuration parse_configuration(const std::string& line, const Box& box) {
  Configuration config;
  std::stringstream ss(line);
  std::string token;
  while (std::getline(ss, token, ',')) {
    const auto first = token.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      throw std::invalid_argument("parse_configuration: empty hyperplane field");
    }
    const auto last = token.find_last_not_of(" \t\r");
    config.insert(parse_hyperplane(token.substr(first, last - first + 1), box));
  }
  if (config.empty()) {
    throw std::invalid_argument("parse_configuration: no hyperplanes in line");
  }
  return config;
}

std::string format_configuration(const Configuration& config) {
  std::string out;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_hyperplane(config.hyperplanes()[i]);
  }
  return out;
}

std::vector<Configuration> read_configurations(std::istream& in, const Box& box) {
  std::vector<Configuration> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_configuration(line, box));
  }
  return out;
}

}  // namespace covsieve
