#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mfl {

/// Fixed-size pool running contiguous index ranges. The partition of [0, n)
/// depends only on n and the pool size, so per-range work is reproducible.
class ThreadPool {
public:
  using RangeFn = std::function<void(std::size_t begin, std::size_t end, int worker)>;

  explicit ThreadPool(int threads = 1);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int size() const { return static_cast<int>(workers_.size()) + 1; }
  /// Blocks until every range has run. Exceptions from workers are rethrown.
  void parallel_for(std::size_t n, const RangeFn& fn);

private:
  void worker_loop(int id);

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const RangeFn* job_ = nullptr;
  std::size_t job_n_ = 0;
  long generation_ = 0;
  int pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

/// Runs fn over [0, n) on the pool, or inline when pool is null.
void parallel_for(ThreadPool* pool, std::size_t n, const ThreadPool::RangeFn& fn);

/// Hardware concurrency clamped to >= 1.
int default_thread_count();

}  // namespace mfl
