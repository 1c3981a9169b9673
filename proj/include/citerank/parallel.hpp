#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace citerank {

/// Resolves a requested thread count; 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Splits [0, n) into `threads` contiguous chunks and calls
/// fn(begin, end, chunk) for each. Chunk boundaries depend only on n and
/// the thread count, so per-chunk partial results merge deterministically.
template <class Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn &&fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2 * threads) {
        fn(std::size_t{0}, n, 0u);
        return;
    }
    const std::size_t step = (n + threads - 1) / threads;
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t) {
        const std::size_t begin = std::min(n, t * step);
        const std::size_t end = std::min(n, begin + step);
        pool.emplace_back([&fn, begin, end, t] { fn(begin, end, t); });
    }
    fn(std::size_t{0}, std::min(n, step), 0u);
}

/// Chunk count actually used by parallel_chunks for (n, threads).
inline unsigned chunk_count(std::size_t n, unsigned threads) {
    threads = std::max(1u, threads);
    return (threads == 1 || n < 2 * threads) ? 1u : threads;
}

} // namespace citerank
