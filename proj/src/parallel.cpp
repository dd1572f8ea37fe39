#include "clmri/parallel.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace clmri {

namespace {

std::size_t initial_worker_count() {
  if (const char* env = std::getenv("CLMRI_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::size_t g_workers = initial_worker_count();

// Fork-join pool with a fixed static partition per task. Workers are lazily
// started and live for the process lifetime (the pool is intentionally
// leaked so worker threads never race process teardown).
class Pool {
 public:
  static Pool& instance() {
    static Pool* pool = new Pool;
    return *pool;
  }

  void run(std::size_t n, std::size_t ways, const std::function<void(std::size_t, std::size_t)>& fn) {
    ensure_workers(ways - 1);
    {
      std::unique_lock<std::mutex> lock(mutex_);
      task_ = &fn;
      task_n_ = n;
      task_ways_ = ways;
      remaining_ = threads_.size();  // every worker acknowledges each generation
      ++generation_;
    }
    cv_start_.notify_all();
    run_chunk(n, ways, 0, fn);  // caller executes chunk 0
    std::unique_lock<std::mutex> lock(mutex_);
    cv_done_.wait(lock, [&] { return remaining_ == 0; });
    task_ = nullptr;
  }

 private:
  static void run_chunk(std::size_t n, std::size_t ways, std::size_t idx,
                        const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t chunk = (n + ways - 1) / ways;
    const std::size_t begin = idx * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin < end) fn(begin, end);
  }

  void ensure_workers(std::size_t count) {
    std::unique_lock<std::mutex> lock(mutex_);
    while (threads_.size() < count) {
      const std::size_t idx = threads_.size() + 1;  // chunk index for this worker
      const std::uint64_t gen = generation_;
      threads_.emplace_back([this, idx, gen] { worker_loop(idx, gen); });
      threads_.back().detach();
    }
  }

  void worker_loop(std::size_t idx, std::uint64_t seen) {
    for (;;) {
      const std::function<void(std::size_t, std::size_t)>* task = nullptr;
      std::size_t n = 0, ways = 0;
      {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_start_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        task = task_;
        n = task_n_;
        ways = task_ways_;
      }
      if (idx < ways) run_chunk(n, ways, idx, *task);
      std::unique_lock<std::mutex> lock(mutex_);
      if (--remaining_ == 0) cv_done_.notify_all();
    }
  }

  std::mutex mutex_;
  std::condition_variable cv_start_, cv_done_;
  std::vector<std::thread> threads_;
  const std::function<void(std::size_t, std::size_t)>* task_ = nullptr;
  std::size_t task_n_ = 0, task_ways_ = 0, remaining_ = 0;
  std::uint64_t generation_ = 0;
};

}  // namespace

std::size_t worker_count() { return g_workers; }

void set_worker_count(std::size_t n) { g_workers = n == 0 ? 1 : n; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t ways = std::min(g_workers, n);
  if (ways <= 1) {
    fn(0, n);
    return;
  }
  Pool::instance().run(n, ways, fn);
}

}  // namespace clmri
