#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spc {

// Maps fn over [0, count); slot i always receives fn(i), so the output is
// identical for every thread count. Reductions over the result must be done
// sequentially by the caller to keep summation order fixed.
template <class T, class Fn>
std::vector<T> run_indexed(std::size_t count, int threads, Fn&& fn) {
  std::vector<T> out(count);
#ifdef _OPENMP
  if (threads > 1) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    return out;
  }
#endif
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace spc
