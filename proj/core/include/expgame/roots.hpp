#pragma once

#include <cmath>
#include <string>

#include "expgame/errors.hpp"

namespace expgame {

/// Bisection for a sign change of `f` on [lo, hi]. The bracket is never
/// widened; a bracket without a sign change throws NumericalError.
template <class F>
double bisect(F&& f, double lo, double hi, double x_tol = 1e-12, int max_iter = 400) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!(std::signbit(f_lo) != std::signbit(f_hi))) {
    throw NumericalError("root bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] does not contain a sign change");
  }
  for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > x_tol) throw NumericalError("bisection did not reach the requested tolerance");
  return 0.5 * (lo + hi);
}

}  // namespace expgame
