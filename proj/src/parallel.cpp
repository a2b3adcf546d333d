#include "pertlab/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>

namespace pertlab {

namespace {
std::atomic<int> g_threads{0};
}

int default_threads() {
  int n = g_threads.load();
  if (n > 0) return n;
  if (const char* env = std::getenv("PERTLAB_THREADS")) {
    try {
      n = std::stoi(env);
    } catch (...) {
      n = 0;
    }
  }
  if (n <= 0) n = omp_get_max_threads();
  g_threads.store(n);
  return n;
}

void set_threads(int n) { g_threads.store(n > 0 ? n : 0); }

namespace detail {

void run_indexed(Exec exec, std::size_t n, void (*thunk)(void*, std::size_t), void* ctx) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) thunk(ctx, i);
    return;
  }
  // Exceptions cannot cross the OpenMP region; the one with the lowest
  // index is rethrown so the failure does not depend on scheduling.
  std::exception_ptr first;
  std::size_t first_index = n;
  std::mutex mu;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(default_threads())
  for (long long i = 0; i < count; ++i) {
    try {
      thunk(ctx, static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<std::size_t>(i) < first_index) {
        first_index = static_cast<std::size_t>(i);
        first = std::current_exception();
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace detail
}  // namespace pertlab
