#pragma once

#include <cstdint>
#include <functional>

namespace redelex {

// Worker cap: REDELEX_THREADS env var, else min(hardware, 4).
int max_threads();

// Runs fn(i) for i in [0, n). Rows are independent and each is computed by
// exactly one thread, so results are identical at any thread count.
void parallel_rows(int64_t n, const std::function<void(int64_t)>& fn);

}  // namespace redelex
