#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace descentlab {

/// Worker count used when a caller passes 0: DESCENTLAB_THREADS if set to a
/// positive integer, else std::thread::hardware_concurrency() (at least 1).
unsigned default_threads();

/// Runs body(begin, end) over contiguous blocks of [0, count). Blocks are
/// fixed by (count, threads) alone, so results the caller stores by index
/// merge identically regardless of scheduling. The first exception thrown by
/// any block (in block order) is rethrown after all workers finish.
template <class Body>
void parallel_blocks(std::size_t count, unsigned threads, Body&& body) {
  if (threads == 0) threads = default_threads();
  const std::size_t workers = std::min<std::size_t>(threads, std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&body, &errors, w, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace descentlab
