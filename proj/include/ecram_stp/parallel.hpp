#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ecram_stp {

/// Runs body(begin, end) over [0, n) split into `jobs` contiguous chunks.
/// Each index is handled by exactly one chunk, so per-index outputs written
/// into presized storage do not depend on `jobs`.
template <class Body>
void parallel_chunks(std::size_t n, int jobs, Body&& body) {
  const std::size_t lanes = std::clamp<std::size_t>(jobs < 1 ? 1 : static_cast<std::size_t>(jobs), 1,
                                                    std::max<std::size_t>(n, 1));
  if (lanes == 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t chunk = (n + lanes - 1) / lanes;
  for (std::size_t lane = 0; lane < lanes; ++lane) {
    const std::size_t begin = lane * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ecram_stp
