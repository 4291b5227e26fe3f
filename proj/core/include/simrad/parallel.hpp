#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace simrad {

/// Caps the number of worker threads used by the library (0 = hardware concurrency).
void set_max_threads(unsigned count);
unsigned max_threads();

/// Calls `body(i)` for every i in [0, count). Iterations are split into
/// contiguous blocks, one per worker; `body` must only write disjoint outputs.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&body, begin, end] {
            for (std::size_t i = begin; i < end; ++i)
                body(i);
        });
    }
    for (auto& t : pool)
        t.join();
}

/// Pairwise (tree) summation; the result depends only on the input order.
double pairwise_sum(const double* values, std::size_t count);
inline double pairwise_sum(const std::vector<double>& values) {
    return pairwise_sum(values.data(), values.size());
}

} // namespace simrad
