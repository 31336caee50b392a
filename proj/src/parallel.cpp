#include "presslab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace presslab {

namespace {
std::atomic<int> g_worker_threads{1};
}

void set_worker_threads(int threads) {
  g_worker_threads.store(threads > 1 ? threads : 1);
}

int worker_threads() { return g_worker_threads.load(); }

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t workers = threads > 1
                            ? std::min<std::size_t>(static_cast<std::size_t>(threads), count)
                            : 1;
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace presslab
