#pragma once

// Data-parallel loop primitives shared by every grid kernel.
//
// Results never depend on the thread count: parallel loops write into
// per-index slots, and reductions run afterwards in index order. The serial
// policy is the reference path used by the tests and the benchmark.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace rigidlab {

enum class Exec { serial, parallel };

/// Neumaier-compensated sum in index order.
inline double ordered_sum(std::span<const double> values) {
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if ((sum >= 0 ? sum : -sum) >= (v >= 0 ? v : -v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

int thread_count();
void set_thread_count(int threads);

/// Calls fn(i) for i in [0, n). With Exec::parallel the iterations are
/// distributed over OpenMP threads; an exception thrown by any iteration is
/// rethrown after the loop (the one with the lowest index wins).
template <class Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first;
  std::size_t first_index = n;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(rigidlab_for_each_index)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

/// out[i] = fn(i), evaluated per `exec`.
template <class T, class Fn>
std::vector<T> map_indices(std::size_t n, Exec exec, Fn&& fn) {
  std::vector<T> out(n);
  for_each_index(n, exec, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace rigidlab
