#pragma once

#include <cstddef>
#include <vector>

namespace pertlab {

/// Execution policy for the heavy kernels. Both policies produce bit-identical
/// results: work items are evaluated independently and reduced in index order.
enum class Exec { serial, parallel };

/// Default worker count; PERTLAB_THREADS overrides the OpenMP default.
int default_threads();
void set_threads(int n);

namespace detail {
void run_indexed(Exec exec, std::size_t n, void (*thunk)(void*, std::size_t), void* ctx);
}

/// Calls f(i) for i in [0, n).
template <class F>
void for_each_index(Exec exec, std::size_t n, F&& f) {
  auto thunk = [](void* ctx, std::size_t i) { (*static_cast<F*>(ctx))(i); };
  detail::run_indexed(exec, n, thunk, static_cast<void*>(&f));
}

/// out[i] = f(i), evaluated under the policy.
template <class T, class F>
std::vector<T> map_indexed(Exec exec, std::size_t n, F&& f) {
  std::vector<T> out(n);
  for_each_index(exec, n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace pertlab
