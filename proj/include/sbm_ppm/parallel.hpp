#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace sbm_ppm {

// Worker count: SBM_PPM_THREADS if set and positive, else the hardware
// concurrency (at least 1).
inline unsigned worker_count() {
  if (const char* env = std::getenv("SBM_PPM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs job(i) for i in [0, count) on a pool of workers pulling indices
// from a shared counter. The first exception thrown by a job is rethrown
// after all workers join.
template <class Job>
void parallel_for(std::size_t count, Job&& job, unsigned workers = worker_count()) {
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), std::max<std::size_t>(count, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

// Hands results to `emit` strictly in index order even when they complete
// out of order.
template <class T, class Emit>
class OrderedSink {
 public:
  OrderedSink(std::size_t count, Emit emit) : slots_(count), ready_(count, false), emit_(std::move(emit)) {}

  void put(std::size_t index, T value) {
    std::lock_guard lock(mutex_);
    slots_[index] = std::move(value);
    ready_[index] = true;
    while (next_ < slots_.size() && ready_[next_]) emit_(slots_[next_++]);
  }

 private:
  std::vector<T> slots_;
  std::vector<bool> ready_;
  std::size_t next_ = 0;
  Emit emit_;
  std::mutex mutex_;
};

}  // namespace sbm_ppm
