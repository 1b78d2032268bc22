#pragma once

#include <functional>

namespace hamzoo {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_depth = 40;
};

/// Adaptive Simpson with interval bisection and Richardson correction.
/// b < a is allowed (negated integral). Throws QuadratureFailure when a panel
/// cannot meet its share of the tolerance within max_depth bisections.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b,
                                  const QuadratureOptions& options = {});

}  // namespace hamzoo
