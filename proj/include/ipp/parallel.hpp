#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

namespace ipp {

/// Evaluates fn(0..count-1) in parallel and returns results in index order.
/// Each call must depend only on its index (per-replica seeds), so the
/// output is identical to map_replicas_serial.
template <class Fn>
auto map_replicas(std::size_t count, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(count);
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

/// Serial reference for map_replicas.
template <class Fn>
auto map_replicas_serial(std::size_t count, Fn&& fn)
    -> std::vector<decltype(fn(std::size_t{}))> {
  std::vector<decltype(fn(std::size_t{}))> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
  return out;
}

}  // namespace ipp
