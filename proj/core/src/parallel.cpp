#include "simrad/parallel.hpp"

#include <atomic>

namespace simrad {

namespace {
std::atomic<unsigned> g_max_threads{0};
}

void set_max_threads(unsigned count) { g_max_threads.store(count); }

unsigned max_threads() {
    const unsigned requested = g_max_threads.load();
    if (requested != 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

double pairwise_sum(const double* values, std::size_t count) {
    if (count == 0)
        return 0.0;
    if (count <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i)
            s += values[i];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, count - half);
}

} // namespace simrad
