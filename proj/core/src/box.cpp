#include "covsieve/box.hpp"

#include <stdexcept>
#include <string>

namespace covsieve {

Box::Box(std::vector<int> sizes, std::vector<int> labels)
    : sizes_(std::move(sizes)), labels_(std::move(labels)) {
  for (int s : sizes_) {
    if (s < 2) {
      throw std::invalid_argument("Box: every coordinate size must be >= 2, got " +
                                  std::to_string(s));
    }
  }
  if (!labels_.empty() && labels_.size() != sizes_.size()) {
    throw std::invalid_argument("Box: label count must equal dimension");
  }
}

std::uint64_t Box::prefix_count(int k) const {
  if (k < 0 || k > dimension()) {
    throw std::out_of_range("Box::prefix_count: level out of range");
  }
  std::uint64_t n = 1;
  for (int i = 0; i < k; ++i) {
    std::uint64_t next;
    if (__builtin_mul_overflow(n, static_cast<std::uint64_t>(sizes_[static_cast<std::size_t>(i)]),
                               &next)) {
      throw std::overflow_error("Box::prefix_count: point count exceeds 64 bits");
    }
    n = next;
  }
  return n;
}

std::uint64_t Box::encode(const Point& p) const {
  const int k = static_cast<int>(p.size());
  if (k > dimension()) {
    throw std::out_of_range("Box::encode: point longer than dimension");
  }
  std::uint64_t idx = 0;
  std::uint64_t stride = 1;
  for (int i = 0; i < k; ++i) {
    const int v = p[static_cast<std::size_t>(i)];
    const int s = sizes_[static_cast<std::size_t>(i)];
    if (v < 1 || v > s) {
      throw std::out_of_range("Box::encode: coordinate value out of range");
    }
    idx += static_cast<std::uint64_t>(v - 1) * stride;
    stride *= static_cast<std::uint64_t>(s);
  }
  return idx;
}

void Box::decode_into(std::uint64_t index, int level, int* out) const {
  for (int i = 0; i < level; ++i) {
    const auto s = static_cast<std::uint64_t>(sizes_[static_cast<std::size_t>(i)]);
    out[i] = static_cast<int>(index % s) + 1;
    index /= s;
  }
}

Point Box::decode(std::uint64_t index, int level) const {
  if (level < 0 || level > dimension()) {
    throw std::out_of_range("Box::decode: level out of range");
  }
  Point p(static_cast<std::size_t>(level));
  decode_into(index, level, p.data());
  return p;
}

Box Box::prefix(int k) const {
  if (k < 0 || k > dimension()) {
    throw std::out_of_range("Box::prefix: level out of range");
  }
  std::vector<int> s(sizes_.begin(), sizes_.begin() + k);
  std::vector<int> l;
  if (!labels_.empty()) l.assign(labels_.begin(), labels_.begin() + k);
  return Box(std::move(s), std::move(l));
}

}  // namespace covsieve
