#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ics {

// Runs fn(worker, index) for index in [0, count) on up to `workers` threads.
// `worker` is a stable id in [0, workers), so callers can hand each thread a
// private scratch slot.  Tasks must write only to their own output slots;
// results are then independent of scheduling and of the worker count.
// The first exception thrown by any task is rethrown after all threads join.
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (workers < 1) workers = 1;
  if (static_cast<std::size_t>(workers) > count) workers = static_cast<int>(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(0, i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto body = [&](std::size_t worker) {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) break;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) break;
      }
      try {
        fn(worker, i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        break;
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back(body, static_cast<std::size_t>(w));
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ics
