#include "simrad/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace simrad::fft {

namespace {

using Key = std::tuple<int, int, int, int, int, int>; // rank, n0, n1, n2, count, sign

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_)
            fftw_destroy_plan(plan);
    }

    fftw_plan get(const Key& key) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(key);
        if (it != plans_.end())
            return it->second;
        const auto [rank, n0, n1, n2, count, sign] = key;
        const std::size_t total = static_cast<std::size_t>(n0) * n1 * n2 * count;
        std::vector<cplx> scratch(total);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = nullptr;
        // FFTW is row-major (last index fastest); our axis 0 is fastest.
        if (rank == 3) {
            plan = fftw_plan_dft_3d(n2, n1, n0, buf, buf, sign, flags);
        } else if (rank == 2) {
            plan = fftw_plan_dft_2d(n1, n0, buf, buf, sign, flags);
        } else {
            int n = n0;
            plan = fftw_plan_many_dft(1, &n, count, buf, nullptr, 1, n, buf, nullptr, 1, n, sign,
                                      flags);
        }
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

int sign_of(Direction dir) { return dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD; }

void execute(const Key& key, cplx* data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(cache().get(key), buf, buf);
}

} // namespace

void transform_3d(cplx* data, int n0, int n1, int n2, Direction dir) {
    execute({3, n0, n1, n2, 1, sign_of(dir)}, data);
}

void transform_2d(cplx* data, int n0, int n1, Direction dir) {
    execute({2, n0, n1, 1, 1, sign_of(dir)}, data);
}

void transform_rows(cplx* data, int n, int count, Direction dir) {
    execute({1, n, 1, 1, count, sign_of(dir)}, data);
}

} // namespace simrad::fft
