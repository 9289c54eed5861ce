#pragma once

#include <functional>

namespace svgeom {

struct QuadratureResult {
  double value;
  double error_estimate;
  int evaluations;
};

/// Adaptive Simpson with Richardson correction on [a, b].
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-12, int max_depth = 60);

}  // namespace svgeom
