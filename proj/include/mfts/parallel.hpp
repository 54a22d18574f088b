#pragma once

#include <cstddef>
#include <functional>

namespace mfts {

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// handled by exactly one call, so writes to per-index slots need no locking.
// Exceptions are rethrown on the calling thread (the lowest failing index wins).
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body);

}  // namespace mfts
