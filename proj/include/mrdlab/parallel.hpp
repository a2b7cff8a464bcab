#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace mrdlab {

/// Splits [begin, end) into `workers` contiguous chunks and runs
/// fn(chunk_index, lo, hi) on each. Chunk boundaries depend only on the
/// range and worker count, so per-chunk results merged in chunk order are
/// deterministic regardless of scheduling. workers <= 1 runs inline.
template <class Fn>
void parallel_chunks(std::size_t begin, std::size_t end, unsigned workers, Fn&& fn) {
    const std::size_t total = end > begin ? end - begin : 0;
    if (workers <= 1 || total < 2) {
        if (total) fn(0u, begin, end);
        return;
    }
    if (workers > total) workers = static_cast<unsigned>(total);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t base = total / workers, extra = total % workers;
    std::size_t lo = begin;
    for (unsigned c = 0; c < workers; ++c) {
        const std::size_t hi = lo + base + (c < extra ? 1 : 0);
        pool.emplace_back([&fn, c, lo, hi] { fn(c, lo, hi); });
        lo = hi;
    }
    for (auto& th : pool) th.join();
}

}  // namespace mrdlab
