#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace vdlab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // Kronrod-Gauss difference, summed over subintervals
  double l1 = 0.0;     // integral of |f|, the scale of the relative test
  std::size_t intervals = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod.  Starts from the intervals
/// between consecutive breakpoints and keeps bisecting the interval with the
/// largest error estimate until the summed estimate drops below
/// rel_tol * l1.  Throws RuntimeError with the worst interval when
/// max_intervals is reached first.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f, std::span<const double> breakpoints,
                                     double rel_tol, std::size_t max_intervals = 200000);

}  // namespace vdlab
