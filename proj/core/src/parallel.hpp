#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace bfgsadmm::detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers, each owning a
// contiguous chunk. If any call throws, the exception from the lowest chunk
// is rethrown after all workers join, so failures are reported the same way
// regardless of the thread count.
template <typename Fn>
void for_each_agent(int count, int threads, Fn&& fn) {
  const int workers = std::clamp(threads, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      const int begin = count * w / workers;
      const int end = count * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          for (int i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace bfgsadmm::detail
