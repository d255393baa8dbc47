#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

namespace tclab {

template <class W>
struct Hit {
  std::size_t index = 0;
  W value;
};

/// Runs `kernel(i)` for i in [0, n) and returns the hit with the smallest index.
///
/// The serial path stops at the first hit. The OpenMP path skips indices past
/// the best hit seen so far, and every index below it still runs, so both
/// paths return the same hit. An exception counts as a hit and is rethrown if
/// it is the first one.
template <class W, class Kernel>
std::optional<Hit<W>> first_hit(std::size_t n, Kernel&& kernel, bool parallel) {
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::optional<W> w = kernel(i)) return Hit<W>{i, std::move(*w)};
    }
    return std::nullopt;
  }
  std::atomic<std::size_t> best{n};
  std::vector<std::optional<W>> hits(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (i > best.load(std::memory_order_relaxed)) continue;
    try {
      hits[i] = kernel(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
    if (hits[i] || errors[i]) {
      std::size_t current = best.load();
      while (i < current && !best.compare_exchange_weak(current, i)) {
      }
    }
  }
  const std::size_t b = best.load();
  if (b == n) return std::nullopt;
  if (errors[b]) std::rethrow_exception(errors[b]);
  return Hit<W>{b, std::move(*hits[b])};
}

/// Number of instances a sweep examined: everything up to and including the first hit.
template <class W>
std::size_t examined(const std::optional<Hit<W>>& hit, std::size_t n) {
  return hit ? hit->index + 1 : n;
}

}  // namespace tclab
