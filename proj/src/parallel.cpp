#include "ecarm/parallel.hpp"

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ecarm::parallel {

unsigned default_workers() {
  if (const char* env = std::getenv("ECARM_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

void for_chunks(u64 count, unsigned workers, const std::function<void(unsigned, u64, u64)>& body) {
  if (workers == 0) throw InvalidInput("worker count must be positive");
  const u64 chunks = std::min<u64>(workers, std::max<u64>(count, 1));
  if (chunks == 1) {
    body(0, 0, count);
    return;
  }
  std::exception_ptr first;
  std::mutex guard;
  std::vector<std::thread> threads;
  for (u64 c = 0; c < chunks; ++c) {
    const u64 begin = count * c / chunks;
    const u64 end = count * (c + 1) / chunks;
    threads.emplace_back([&, c, begin, end] {
      try {
        body(static_cast<unsigned>(c), begin, end);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!first) first = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace ecarm::parallel
