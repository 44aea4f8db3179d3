#pragma once

#include <functional>
#include <span>

namespace lgl::quad {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration over the partition given by
/// `breakpoints` (sorted, at least two entries). Subdivides the interval with the largest
/// error estimate until the summed estimate is below max(abs_tol, rel_tol * |value|).
/// Throws QuadratureError when `max_intervals` is exhausted first.
QuadResult integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                     double abs_tol, double rel_tol, int max_intervals = 5000);

}  // namespace lgl::quad
