#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace dilation {

/// Split [items.begin(), items.end()) into one contiguous chunk per worker,
/// run fn(begin, end) on each, and return the per-chunk results in chunk
/// order. With workers <= 1 everything runs inline. Chunk boundaries depend
/// only on the worker count, so callers that merge associatively get output
/// independent of scheduling.
template <typename Item, typename Result, typename Fn>
std::vector<Result> parallel_map_chunks(const std::vector<Item>& items, unsigned workers, Fn fn) {
    using Iter = typename std::vector<Item>::const_iterator;
    workers = std::max(1u, workers);
    std::size_t n = items.size();
    std::size_t chunks = std::min<std::size_t>(workers, std::max<std::size_t>(n, 1));
    std::vector<Result> results(chunks);

    auto bounds = [&](std::size_t c) -> std::pair<Iter, Iter> {
        std::size_t lo = n * c / chunks;
        std::size_t hi = n * (c + 1) / chunks;
        return {items.begin() + lo, items.begin() + hi};
    };

    if (chunks == 1) {
        auto [lo, hi] = bounds(0);
        results[0] = fn(lo, hi);
        return results;
    }

    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        pool.emplace_back([&, c] {
            auto [lo, hi] = bounds(c);
            results[c] = fn(lo, hi);
        });
    }
    for (auto& t : pool) t.join();
    return results;
}

}  // namespace dilation
