#include "redelex/threads.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace redelex {

int max_threads() {
    static int cached = [] {
        if (const char* env = std::getenv("REDELEX_THREADS")) {
            int n = std::atoi(env);
            if (n >= 1) return n;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return static_cast<int>(std::min(hw == 0 ? 1u : hw, 4u));
    }();
    return cached;
}

void parallel_rows(int64_t n, const std::function<void(int64_t)>& fn) {
    int workers = max_threads();
    if (workers <= 1 || n < 64) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    workers = static_cast<int>(std::min<int64_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    int64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int64_t lo = w * chunk;
        int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace redelex
