#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace ordgrowth {

// Enclosure [center - halfwidth, center + halfwidth] of a real quantity.
struct enclosure {
  double center = 0.0;
  double halfwidth = 0.0;

  double lower() const { return center - halfwidth; }
  double upper() const { return center + halfwidth; }
  bool contains(double v) const { return v >= lower() && v <= upper(); }
};

namespace detail {

// Compensated value: hi + lo with |lo| <= ulp(hi)/2. Enough head-room to
// decide signs of sums of a few hundred moderate doubles exactly, which the
// translation fast path of the circle order oracle relies on.
struct dd {
  double hi = 0.0;
  double lo = 0.0;

  static dd from(double x) { return {x, 0.0}; }

  friend dd operator+(dd a, double b) {
    double s = a.hi + b;
    double bb = s - a.hi;
    double err = (a.hi - (s - bb)) + (b - bb);
    double lo = a.lo + err;
    double hi = s + lo;
    return {hi, lo - (hi - s)};
  }

  friend dd operator+(dd a, dd b) { return (a + b.hi) + b.lo; }

  friend dd operator-(dd a, dd b) { return a + dd{-b.hi, -b.lo}; }

  double value() const { return hi; }
  int sign() const {
    if (hi > 0.0 || (hi == 0.0 && lo > 0.0)) return 1;
    if (hi < 0.0 || (hi == 0.0 && lo < 0.0)) return -1;
    return 0;
  }
};

// Deterministic work splitting: the result of any min/append reduction over
// chunks does not depend on the number of workers.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (n == 0) return;
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned workers = std::min<std::size_t>(std::max(1u, jobs == 0 ? hw : jobs), n);
  if (workers == 1) {
    chunk_fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t base = n / workers, rem = n % workers, begin = 0;
  for (unsigned w = 0; w < workers; ++w) {
    std::size_t len = base + (w < rem ? 1 : 0);
    pool.emplace_back(chunk_fn, begin, begin + len);
    begin += len;
  }
  for (auto& t : pool) t.join();
}

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 6.28318530717958647692;

}  // namespace detail

}  // namespace ordgrowth
