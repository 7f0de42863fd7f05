#pragma once

#include <cstddef>
#include <functional>

namespace sedlab {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration on [lo, hi]. The
/// interval with the largest error estimate is bisected until the summed
/// estimate is at most `abs_tol` or `max_intervals` is reached.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                                    double abs_tol, std::size_t max_intervals = 4096);

}  // namespace sedlab
