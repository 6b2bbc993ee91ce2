#include "covsieve/primes.hpp"

#include <cmath>
#include <stdexcept>

namespace covsieve {

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
  std::vector<std::int64_t> out;
  if (limit < 2) return out;
  std::vector<char> composite(static_cast<std::size_t>(limit) + 1, 0);
  for (std::int64_t p = 2; p <= limit; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    out.push_back(p);
    for (std::int64_t q = p * p; q <= limit; q += p) composite[static_cast<std::size_t>(q)] = 1;
  }
  return out;
}

std::vector<std::int64_t> first_primes(int n) {
  if (n < 0) throw std::invalid_argument("first_primes: negative count");
  if (n == 0) return {};
  // p_n < n (log n + log log n) for n >= 6
  const double nd = std::max(6.0, static_cast<double>(n));
  auto limit = static_cast<std::int64_t>(nd * (std::log(nd) + std::log(std::log(nd)))) + 16;
  for (;;) {
    std::vector<std::int64_t> ps = primes_up_to(limit);
    if (static_cast<int>(ps.size()) >= n) {
      ps.resize(static_cast<std::size_t>(n));
      return ps;
    }
    limit *= 2;
  }
}

}  // namespace covsieve
