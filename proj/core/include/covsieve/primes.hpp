#pragma once

#include <cstdint>
#include <vector>

namespace covsieve {

/// Primes up to and including `limit`.
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

/// The first n primes.
std::vector<std::int64_t> first_primes(int n);

}  // namespace covsieve
