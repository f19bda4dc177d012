#pragma once

#include <cstddef>
#include <functional>

namespace riesz {

// Worker cap: min(RIESZ_THREADS, hardware concurrency); at least 1.
int max_threads();

// Runs fn(begin, end) over a fixed partition of [0, n) into contiguous blocks.
// The partition depends only on n and block_size, never on the thread count,
// so any result written by block index is reproducible.
void parallel_for_blocks(std::size_t n, std::size_t block_size,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace riesz
