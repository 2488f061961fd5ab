#pragma once

// Point sweeps. Every verification suite reduces a residual over a sample
// set; the per-point work is independent, so the OpenMP kernels below are
// used in production and the serial versions are kept as the reference the
// tests compare against.

#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <vector>

#include "nlg/smooth.hpp"

#ifdef NLG_HAVE_OPENMP
#include <omp.h>
#endif

namespace nlg {

/// Largest value and the first index attaining it.
struct ArgMax {
  double value = 0.0;
  std::ptrdiff_t index = -1;
};

inline void merge_argmax(ArgMax& into, const ArgMax& other) {
  if (other.index < 0) return;
  if (into.index < 0 || other.value > into.value ||
      (other.value == into.value && other.index < into.index))
    into = other;
}

namespace serial {

template <class F>
ArgMax max_over(std::size_t n, F&& residual) {
  ArgMax best;
  for (std::size_t i = 0; i < n; ++i) {
    double v = residual(i);
    if (v != v) v = std::numeric_limits<double>::infinity();
    merge_argmax(best, {v, static_cast<std::ptrdiff_t>(i)});
  }
  return best;
}

template <class R, class F>
std::vector<R> map_points(std::size_t n, F&& f) {
  std::vector<R> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

}  // namespace serial

namespace parallel {

/// OpenMP max-reduction; ties resolve to the lowest index so the result is
/// identical to serial::max_over. NaN residuals win the reduction so they
/// are never masked.
template <class F>
ArgMax max_over(std::size_t n, F&& residual) {
#ifdef NLG_HAVE_OPENMP
  ArgMax best;
  std::exception_ptr failure;
#pragma omp parallel
  {
    ArgMax local;
#pragma omp for schedule(dynamic, 4) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        double v = residual(static_cast<std::size_t>(i));
        if (v != v) v = std::numeric_limits<double>::infinity();
        merge_argmax(local, {v, i});
      } catch (...) {
#pragma omp critical(nlg_sweep_error)
        if (!failure) failure = std::current_exception();
      }
    }
#pragma omp critical(nlg_sweep_merge)
    merge_argmax(best, local);
  }
  if (failure) std::rethrow_exception(failure);
  return best;
#else
  return serial::max_over(n, residual);
#endif
}

template <class R, class F>
std::vector<R> map_points(std::size_t n, F&& f) {
#ifdef NLG_HAVE_OPENMP
  std::vector<R> out(n);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(nlg_sweep_error)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
#else
  return serial::map_points<R>(n, f);
#endif
}

}  // namespace parallel

/// Max-abs entry of a vector.
inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    const double a = x < 0 ? -x : x;
    if (a > m || a != a) m = a;
  }
  return m;
}

}  // namespace nlg
