#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace oscpic {

/// Fixed-size worker pool for particle loops. for_range blocks until every
/// chunk is done, which gives the stage barrier the Poisson pusher needs.
/// A null pool (or size 1) means serial execution on the calling thread.
class ThreadPool {
 public:
  using RangeFn = std::function<void(std::size_t begin, std::size_t end, int thread)>;

  explicit ThreadPool(int threads) : n_threads_(threads < 1 ? 1 : threads) {
    for (int t = 1; t < n_threads_; ++t) {
      workers_.emplace_back([this, t] { worker_loop(t); });
    }
  }

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    for (std::thread& w : workers_) w.join();
  }

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int size() const { return n_threads_; }

  /// Partitions [0, n) into contiguous chunks, one per thread. Thread 0 is
  /// the caller. Returns after all chunks completed.
  void for_range(std::size_t n, const RangeFn& fn) {
    if (n == 0) return;
    if (n_threads_ == 1 || n == 1) {
      fn(0, n, 0);
      return;
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      job_ = &fn;
      job_n_ = n;
      pending_ = n_threads_ - 1;
      ++generation_;
    }
    cv_.notify_all();
    auto [b, e] = chunk(n, 0);
    fn(b, e, 0);
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    job_ = nullptr;
  }

  static void for_range(ThreadPool* pool, std::size_t n, const RangeFn& fn) {
    if (pool)
      pool->for_range(n, fn);
    else if (n > 0)
      fn(0, n, 0);
  }

 private:
  std::pair<std::size_t, std::size_t> chunk(std::size_t n, int t) const {
    const std::size_t per = n / static_cast<std::size_t>(n_threads_);
    const std::size_t rem = n % static_cast<std::size_t>(n_threads_);
    const std::size_t ut = static_cast<std::size_t>(t);
    const std::size_t begin = ut * per + std::min(ut, rem);
    return {begin, begin + per + (ut < rem ? 1 : 0)};
  }

  void worker_loop(int t) {
    std::uint64_t seen = 0;
    for (;;) {
      const RangeFn* job = nullptr;
      std::size_t n = 0;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        job = job_;
        n = job_n_;
      }
      auto [b, e] = chunk(n, t);
      if (b < e) (*job)(b, e, t);
      {
        std::lock_guard<std::mutex> lock(mutex_);
        if (--pending_ == 0) done_cv_.notify_one();
      }
    }
  }

  int n_threads_;
  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  const RangeFn* job_ = nullptr;
  std::size_t job_n_ = 0;
  int pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace oscpic
