#ifndef EP1D_DETAIL_NEWTON_HPP
#define EP1D_DETAIL_NEWTON_HPP

#include <cmath>
#include <utility>

namespace ep1d::detail {

/// Newton iteration on a strictly decreasing (or increasing) function with a
/// maintained bracket [lo, hi]; any Newton step leaving the bracket, or not
/// producing a finite value, falls back to bisection.  `f` returns the pair
/// (value, derivative).  Convergence: relative step below rtol, or the
/// bracket collapses.  Returns the final iterate.
template <class F>
double newton_bracketed(F&& f, double lo, double hi, double x0, double rtol,
                        int max_iter) {
  double flo = f(lo).first;
  double x = x0;
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    auto [fx, dfx] = f(x);
    if (fx == 0.0) return x;
    // shrink the bracket around the sign change
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    double step = fx / dfx;
    double xn = x - step;
    if (!std::isfinite(xn) || xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) <= rtol * (std::abs(xn) + rtol)) return xn;
    x = xn;
    if (hi - lo <= rtol * (std::abs(x) + rtol)) return x;
  }
  return x;
}

}  // namespace ep1d::detail

#endif
