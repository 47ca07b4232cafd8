#include "clonelab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace clonelab {

std::size_t thread_count() {
  if (const char* env = std::getenv("CLONELAB_THREADS")) {
    try {
      long value = std::stol(env);
      if (value > 0) return static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_chunks(std::uint64_t total, std::uint64_t chunk,
                     const std::function<bool(std::uint64_t, std::uint64_t)>& body) {
  if (total == 0) return;
  chunk = std::max<std::uint64_t>(1, chunk);
  const std::uint64_t chunks = (total + chunk - 1) / chunk;
  const std::size_t workers =
      static_cast<std::size_t>(std::min<std::uint64_t>(thread_count(), chunks));

  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      std::uint64_t begin = c * chunk;
      std::uint64_t end = std::min(total, begin + chunk);
      try {
        if (!body(begin, end)) stop = true;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace clonelab
