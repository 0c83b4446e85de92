#include "lvlab/workers.hpp"

#include <atomic>
#include <thread>
#include <vector>

#include "lvlab/errors.hpp"

namespace lvlab {

namespace {
std::atomic<int> g_workers{1};
}

void set_worker_cap(int workers) {
  require(workers >= 1, Code::InvalidArgument, "worker cap must be at least 1");
  g_workers.store(workers);
}

int worker_cap() { return g_workers.load(); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const int cap = worker_cap();
  if (cap <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(cap), count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t k = 0; k < threads; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

} // namespace lvlab
