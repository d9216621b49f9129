// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace rhomax {

// Worker cap used by parallel_for. 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write
// results into per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// RAII override of the worker cap.
class ThreadScope {
 public:
  explicit ThreadScope(unsigned n) : saved_(max_threads()) { set_max_threads(n); }
  ~ThreadScope() { set_max_threads(saved_); }
  ThreadScope(const ThreadScope&) = delete;
  ThreadScope& operator=(const ThreadScope&) = delete;

 private:
  unsigned saved_;
};

}  // namespace rhomax
