#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hjsbv {

/// A point of R^n for n in {1, 2}; the second component is zero in 1-d.
using Point = std::array<double, 2>;

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct RangeError : std::range_error {
  using std::range_error::range_error;
};
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Axis-aligned box; only the first `dim` components are meaningful.
struct Box {
  Point lower{0.0, 0.0};
  Point upper{0.0, 0.0};

  static Box point(const Point& p) { return {p, p}; }

  void expand(const Point& p, int dim) {
    for (int a = 0; a < dim; ++a) {
      lower[a] = std::min(lower[a], p[a]);
      upper[a] = std::max(upper[a], p[a]);
    }
  }
  Box inflated(const Point& by, int dim) const {
    Box b = *this;
    for (int a = 0; a < dim; ++a) {
      b.lower[a] -= by[a];
      b.upper[a] += by[a];
    }
    return b;
  }
  bool contains(const Point& p, int dim, double tol = 0.0) const {
    for (int a = 0; a < dim; ++a)
      if (p[a] < lower[a] - tol || p[a] > upper[a] + tol) return false;
    return true;
  }
  double volume(int dim) const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= std::max(0.0, upper[a] - lower[a]);
    return v;
  }
};

inline double norm(const Point& p, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += p[a] * p[a];
  return std::sqrt(s);
}

inline double dist(const Point& p, const Point& q, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += (p[a] - q[a]) * (p[a] - q[a]);
  return std::sqrt(s);
}

inline bool all_finite(const Point& p, int dim) {
  for (int a = 0; a < dim; ++a)
    if (!std::isfinite(p[a])) return false;
  return true;
}

inline void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw DomainError("dimension must be 1 or 2");
}

/// Worker count from HJSBV_THREADS, defaulting to the hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("HJSBV_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [0, n) on a static partition. Each index is handled
/// by exactly one worker, so writes to per-index slots need no locking.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  unsigned workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n / 64, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace hjsbv
