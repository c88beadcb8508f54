#pragma once

// Error types, thread-count policy, and the deterministic parallel helpers
// shared by every module.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lowlying {

/// Precondition violated by the caller (bad argument, malformed config).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The family's discriminant vanishes identically.
class DegenerateFamily : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Δ(t) = 0 at the requested parameter.
class SingularFiber : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Some local density ν(p) equals p², so the sieved family is empty.
class ZeroDensity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Worker count: LOWLYING_THREADS if set and positive, else hardware.
inline unsigned thread_count() {
  if (const char* env = std::getenv("LOWLYING_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [0, n) over contiguous static chunks. Each index is
/// visited exactly once; callers write only to slot i of preallocated
/// storage, so the outcome never depends on the schedule.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned threads = thread_count()) {
  if (n == 0) return;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Pairwise (cascade) summation in index order. The tree shape depends only
/// on the length, so the result is bit-identical for a given input sequence.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace lowlying
