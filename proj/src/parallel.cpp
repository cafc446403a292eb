#include "openmhd/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace openmhd {

namespace {
std::atomic<int> g_threads{1};
constexpr std::size_t kMinChunk = 256;
}  // namespace

void set_num_threads(int n) { g_threads.store(std::max(1, n)); }
int num_threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(num_threads());
  if (workers <= 1 || n < 2 * kMinChunk) {
    body(0, n);
    return;
  }
  const std::size_t chunks = std::min(workers, n / kMinChunk);
  const std::size_t per = (n + chunks - 1) / chunks;
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> pool;
  pool.reserve(chunks - 1);
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t b = c * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) continue;
    pool.emplace_back([&body, &errors, c, b, e] {
      try {
        body(b, e);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  try {
    body(0, std::min(n, per));
  } catch (...) {
    errors[0] = std::current_exception();
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace openmhd
