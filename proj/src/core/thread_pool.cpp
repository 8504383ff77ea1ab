#include "mfl/core/thread_pool.hpp"

#include <algorithm>

namespace mfl {

namespace {

std::pair<std::size_t, std::size_t> chunk(std::size_t n, int parts, int id) {
  const std::size_t base = n / parts, extra = n % parts;
  const std::size_t b = id * base + std::min<std::size_t>(id, extra);
  return {b, b + base + (static_cast<std::size_t>(id) < extra ? 1 : 0)};
}

}  // namespace

ThreadPool::ThreadPool(int threads) {
  threads = std::max(1, threads);
  for (int i = 1; i < threads; ++i) workers_.emplace_back([this, i] { worker_loop(i); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
}

void ThreadPool::worker_loop(int id) {
  long seen = 0;
  for (;;) {
    const RangeFn* job;
    std::size_t n;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
      job = job_;
      n = job_n_;
    }
    auto [b, e] = chunk(n, size(), id);
    try {
      if (b < e) (*job)(b, e, id);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (--pending_ == 0) done_.notify_one();
    }
  }
}

void ThreadPool::parallel_for(std::size_t n, const RangeFn& fn) {
  if (workers_.empty() || n < 2) {
    if (n > 0) fn(0, n, 0);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    job_ = &fn;
    job_n_ = n;
    pending_ = static_cast<int>(workers_.size());
    error_ = nullptr;
    ++generation_;
  }
  wake_.notify_all();
  std::exception_ptr local;
  auto [b, e] = chunk(n, size(), 0);
  try {
    if (b < e) fn(b, e, 0);
  } catch (...) {
    local = std::current_exception();
  }
  std::unique_lock<std::mutex> lock(mutex_);
  done_.wait(lock, [&] { return pending_ == 0; });
  if (local) std::rethrow_exception(local);
  if (error_) std::rethrow_exception(error_);
}

void parallel_for(ThreadPool* pool, std::size_t n, const ThreadPool::RangeFn& fn) {
  if (pool) {
    pool->parallel_for(n, fn);
  } else if (n > 0) {
    fn(0, n, 0);
  }
}

int default_thread_count() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace mfl
