#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pane {

// Run fn(block_index) for every block. Blocks are statically assigned to
// min(workers, blocks) threads (block b goes to thread b % workers), each
// thread processes its blocks in ascending order, and the join is the phase
// barrier. workers <= 1 runs inline. First exception is rethrown after join.
inline void run_blocks(std::size_t blocks, int workers,
                       const std::function<void(std::size_t)>& fn) {
  if (workers <= 1 || blocks <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b);
    return;
  }
  std::size_t pool = std::min<std::size_t>(static_cast<std::size_t>(workers), blocks);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t w = 0; w < pool; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t b = w; b < blocks; b += pool) fn(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace pane
