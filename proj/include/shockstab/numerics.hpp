#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <utility>
#include <vector>

namespace shockstab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

/// Adaptive composite Gauss-Legendre quadrature (16-point panels). A panel is
/// accepted when its value agrees with the sum over its two halves to within
/// the share of `abs_tol` proportional to its length. Throws NumericalError if
/// the recursion depth is exhausted. Handles b < a with the usual sign.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10);

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must have opposite
/// signs (or one of them vanish). Stops when the bracket is shorter than
/// `tol`.
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);
/// Same, returning the final bracket [a, b] (f(a) and f(b) keep their signs).
std::pair<double, double> bisect_bracket(const std::function<double(double)>& f, double lo, double hi,
                                         double tol = 1e-12);

/// Process-wide default worker count used when an explicit count of 0 is
/// passed. Starts at 1.
void set_default_threads(unsigned k);
unsigned default_threads();

/// Evaluates fn(i) for i in [0, n) on up to `threads` workers and returns the
/// results in index order, so any reduction over the vector is independent of
/// scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, unsigned threads = 0) {
  std::vector<T> out(n);
  if (threads == 0) threads = default_threads();
  if (threads <= 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Evenly spaced points including both ends (n >= 2), or {lo} when n == 1.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace shockstab
