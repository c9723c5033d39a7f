#include "tamegeo/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace tamegeo {

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("TAMEGEO_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) hw = std::min<long>(hw, cap);
  }
  return hw;
}

std::size_t chunk_count(std::size_t n) {
  if (n == 0) return 0;
  // Fixed fan-out per problem size; independent of the thread cap so the
  // chunk boundaries (and therefore concatenated outputs) never change.
  std::size_t c = n / 2048;
  return std::clamp<std::size_t>(c, 1, 64);
}

void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t,
                                              std::size_t)>& fn) {
  const std::size_t chunks = chunk_count(n);
  if (chunks == 0) return;
  const std::size_t threads =
      std::min<std::size_t>(chunks, static_cast<std::size_t>(max_threads()));

  std::vector<std::exception_ptr> errors(chunks);
  auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    try {
      fn(c, begin, end);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace tamegeo
