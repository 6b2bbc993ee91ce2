#include "covsieve/hyperplane.hpp"

#include <stdexcept>

namespace covsieve {

std::uint64_t Hyperplane::fixed_mask() const {
  if (dimension() > 64) {
    throw std::length_error("Hyperplane::fixed_mask: dimension exceeds 64");
  }
  std::uint64_t m = 0;
  for (int i = 0; i < dimension(); ++i) {
    if (is_fixed(i)) m |= std::uint64_t{1} << i;
  }
  return m;
}

std::vector<int> Hyperplane::fixed_coords() const {
  std::vector<int> out;
  for (int i = 0; i < dimension(); ++i) {
    if (is_fixed(i)) out.push_back(i);
  }
  return out;
}

int Hyperplane::codimension() const {
  int c = 0;
  for (int i = 0; i < dimension(); ++i) c += is_fixed(i);
  return c;
}

bool Hyperplane::contains_point(const Point& p) const {
  if (static_cast<int>(p.size()) != dimension()) {
    throw std::invalid_argument("Hyperplane::contains_point: dimension mismatch");
  }
  for (int i = 0; i < dimension(); ++i) {
    if (is_fixed(i) && entry(i) != p[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

std::uint64_t Hyperplane::point_count(const Box& box) const {
  if (box.dimension() != dimension()) {
    throw std::invalid_argument("Hyperplane::point_count: box dimension mismatch");
  }
  std::uint64_t n = 1;
  for (int i = 0; i < dimension(); ++i) {
    if (!is_fixed(i)) n *= static_cast<std::uint64_t>(box.size(i));
  }
  return n;
}

namespace {

int decode_char(char c) {
  if (c >= '1' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 36;
  return -1;
}

char encode_value(int v) {
  if (v >= 1 && v <= 9) return static_cast<char>('0' + v);
  if (v >= 10 && v <= 35) return static_cast<char>('a' + v - 10);
  if (v >= 36 && v <= 61) return static_cast<char>('A' + v - 36);
  throw std::out_of_range("format_hyperplane: value too large for positional encoding");
}

}  // namespace

Hyperplane parse_hyperplane(const std::string& text, const Box& box) {
  if (static_cast<int>(text.size()) != box.dimension()) {
    throw std::invalid_argument("parse_hyperplane: '" + text + "' has length " +
                                std::to_string(text.size()) + ", box dimension is " +
                                std::to_string(box.dimension()));
  }
  std::vector<int> entries(text.size(), Hyperplane::kFree);
  for (int i = 0; i < box.dimension(); ++i) {
    const char c = text[static_cast<std::size_t>(i)];
    if (c == '*') continue;
    const int v = decode_char(c);
    if (v < 0) {
      throw std::invalid_argument(std::string("parse_hyperplane: bad character '") + c + "'");
    }
    if (v > box.size(i)) {
      throw std::out_of_range("parse_hyperplane: value " + std::to_string(v) +
                              " out of range for coordinate " + std::to_string(i + 1) +
                              " (size " + std::to_string(box.size(i)) + ")");
    }
    entries[static_cast<std::size_t>(i)] = v;
  }
  return Hyperplane(std::move(entries));
}

std::string format_hyperplane(const Hyperplane& h) {
  std::string s;
  s.reserve(static_cast<std::size_t>(h.dimension()));
  for (int i = 0; i < h.dimension(); ++i) {
    s.push_back(h.is_fixed(i) ? encode_value(h.entry(i)) : '*');
  }
  return s;
}

bool is_parallel(const Hyperplane& a, const Hyperplane& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("is_parallel: dimension mismatch");
  }
  for (int i = 0; i < a.dimension(); ++i) {
    if (a.is_fixed(i) != b.is_fixed(i)) return false;
  }
  return true;
}

std::optional<Hyperplane> intersect(const Hyperplane& a, const Hyperplane& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("intersect: dimension mismatch");
  }
  std::vector<int> entries(static_cast<std::size_t>(a.dimension()), Hyperplane::kFree);
  for (int i = 0; i < a.dimension(); ++i) {
    const int va = a.entry(i);
    const int vb = b.entry(i);
    if (va != Hyperplane::kFree && vb != Hyperplane::kFree && va != vb) return std::nullopt;
    entries[static_cast<std::size_t>(i)] = va != Hyperplane::kFree ? va : vb;
  }
  return Hyperplane(std::move(entries));
}

Hyperplane restrict_to(const Hyperplane& a, std::uint64_t coords) {
  std::vector<int> entries(static_cast<std::size_t>(a.dimension()), Hyperplane::kFree);
  for (int i = 0; i < a.dimension() && i < 64; ++i) {
    if (coords >> i & 1) entries[static_cast<std::size_t>(i)] = a.entry(i);
  }
  return Hyperplane(std::move(entries));
}

bool is_subset(const Hyperplane& a, const Hyperplane& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("is_subset: dimension mismatch");
  }
  for (int i = 0; i < a.dimension(); ++i) {
    if (b.is_fixed(i) && a.entry(i) != b.entry(i)) return false;
  }
  return true;
}

}  // namespace covsieve
