#include "shockstab/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "shockstab/state.hpp"

namespace shockstab {

namespace {

std::atomic<unsigned> g_threads{1};

double panel(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 16>::integrate(f, a, b);
}

struct Adaptive {
  const std::function<double(double)>& f;
  double tol_density;  // allowed error per unit length
  int panels = 0;
  double err = 0.0;

  double run(double a, double b, double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel(f, a, m);
    const double right = panel(f, m, b);
    const double diff = std::abs(left + right - whole);
    if (!std::isfinite(left + right)) throw NumericalError("quadrature: non-finite integrand");
    if (diff <= tol_density * (b - a) || diff <= 1e-15 * std::abs(whole)) {
      panels += 2;
      err += diff;
      return left + right;
    }
    if (depth >= 40) throw NumericalError("quadrature: no convergence on [" + std::to_string(a) + ", " +
                                          std::to_string(b) + "]");
    return run(a, m, left, depth + 1) + run(m, b, right, depth + 1);
  }
};

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  QuadratureResult r;
  if (a == b) return r;
  const double sign = b < a ? -1.0 : 1.0;
  const double lo = std::min(a, b), hi = std::max(a, b);
  Adaptive ad{f, abs_tol / (hi - lo)};
  r.value = sign * ad.run(lo, hi, panel(f, lo, hi), 0);
  r.error_estimate = ad.err;
  r.panels = ad.panels;
  return r;
}

std::pair<double, double> bisect_bracket(const std::function<double(double)>& f, double lo, double hi,
                                         double tol) {
  const double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, lo};
  if (fhi == 0.0) return {hi, hi};
  if ((flo < 0.0) == (fhi < 0.0)) throw NumericalError("bisection: root is not bracketed");
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  std::uintmax_t iters = 400;
  return boost::math::tools::bisect(f, lo, hi, stop, iters);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const auto [a, b] = bisect_bracket(f, lo, hi, tol);
  return 0.5 * (a + b);
}

void set_default_threads(unsigned k) { g_threads = k == 0 ? 1 : k; }
unsigned default_threads() { return g_threads; }

std::vector<double> linspace(double lo, double hi, int n) {
  if (n <= 0) return {};
  if (n == 1) return {lo};
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  x.back() = hi;
  return x;
}

}  // namespace shockstab
