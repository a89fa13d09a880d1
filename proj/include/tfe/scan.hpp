#pragma once

// Grid-scan helpers: an OpenMP-parallel map over independent work items and a
// serial twin used as the reference in tests and benchmarks.  Results are
// written by grid index, so aggregation order never depends on thread timing.

#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

namespace tfe::scan {

template <class T, class F>
auto serial_map(const std::vector<T>& xs, F&& f) {
  using R = decltype(f(xs[std::size_t{0}]));
  std::vector<R> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
  return out;
}

template <class T, class F>
auto parallel_map(const std::vector<T>& xs, F&& f) {
  using R = decltype(f(xs[std::size_t{0}]));
  std::vector<R> out(xs.size());
#ifdef TFE_HAVE_OPENMP
  std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(xs.size()); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
#else
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
#endif
  return out;
}

}  // namespace tfe::scan
