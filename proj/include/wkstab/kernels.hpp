#pragma once

// Data-parallel kernels. Every kernel has a serial reference path and an
// OpenMP path that produce bit-identical results: work items are evaluated
// independently into index-addressed slots and reduced in index order.

#include <cstddef>
#include <exception>
#include <limits>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wkstab {

enum class Exec { serial, parallel };

int max_threads();
void set_threads(int threads);

namespace kernels {

template <class T, class F>
std::vector<T> map_serial(std::size_t count, F&& f) {
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
  return out;
}

/// Exceptions thrown by work items are captured and the one with the lowest
/// index is rethrown after the parallel region.
template <class T, class F>
std::vector<T> map_parallel(std::size_t count, F&& f) {
  std::vector<T> out(count);
  std::vector<std::exception_ptr> errors(count);
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[i] = f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

template <class T, class F>
std::vector<T> map(std::size_t count, F&& f, Exec exec) {
  return exec == Exec::parallel ? map_parallel<T>(count, std::forward<F>(f))
                                : map_serial<T>(count, std::forward<F>(f));
}

struct MinLocation {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

/// Minimum of f over [0, count); ties resolve to the lowest index.
template <class F>
MinLocation scan_min(std::size_t count, F&& f, Exec exec) {
  auto values = map<double>(count, std::forward<F>(f), exec);
  MinLocation best;
  for (std::size_t i = 0; i < count; ++i)
    if (values[i] < best.value) best = {values[i], i};
  return best;
}

/// Neumaier-compensated sum, order as given.
double compensated_sum(const std::vector<double>& values);

}  // namespace kernels
}  // namespace wkstab
