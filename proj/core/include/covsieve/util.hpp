#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace covsieve {

/// Effective worker count: `requested` if positive, otherwise the
/// COVSIEVE_WORKERS environment variable, otherwise the hardware concurrency.
int worker_count(int requested = 0);

/// Runs fn(i) for i in [0, n) across the given number of workers.  Callers
/// get determinism by writing results into index i of a pre-sized container;
/// the schedule never influences the output.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

std::uint64_t fnv1a(std::string_view data);

}  // namespace covsieve
