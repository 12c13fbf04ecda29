#pragma once

#include <functional>

namespace etk {

// Worker cap from ETK_THREADS (default 1, clamped to hardware concurrency).
int worker_count();

// Runs fn(0..n-1), possibly concurrently. Callers must write results into
// per-index slots and reduce afterwards so the outcome is order-independent.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace etk
