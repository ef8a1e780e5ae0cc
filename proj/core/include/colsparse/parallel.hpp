#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace colsparse {

/// Runs body(chunk) for chunk in [0, chunks) on up to `jobs` threads.
/// The first exception thrown by any chunk is rethrown after all threads join.
template <typename Body>
void parallel_chunks(std::size_t chunks, std::size_t jobs, Body&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, chunks));
  if (jobs == 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        body(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace colsparse
