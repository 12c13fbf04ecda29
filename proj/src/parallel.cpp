#include "etk/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace etk {

int worker_count() {
  const char* env = std::getenv("ETK_THREADS");
  if (!env) return 1;
  int n = 1;
  try {
    n = std::stoi(env);
  } catch (...) {
    return 1;
  }
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) return 1;
  return hw > 0 ? std::min(n, hw) : n;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mutex;
  int err_index = -1;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(err_mutex);
          if (err_index < 0 || i < err_index) {
            err_index = i;
            err = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace etk
