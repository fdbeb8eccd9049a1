#include "transference/parallel.hpp"

namespace transference {

namespace {
std::atomic<unsigned> configured_threads{0};
}

void set_thread_count(unsigned count) noexcept {
  configured_threads.store(count, std::memory_order_relaxed);
}

unsigned thread_count() noexcept {
  const unsigned configured = configured_threads.load(std::memory_order_relaxed);
  if (configured != 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace transference
