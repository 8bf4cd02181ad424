#pragma once

#include <cstddef>
#include <functional>

namespace epns {

/// Worker count from EPNS_THREADS (0 or unset means hardware concurrency).
std::size_t worker_count();

/// Runs body(begin, end) over disjoint chunks of [0, count).
void parallel_for(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace epns
