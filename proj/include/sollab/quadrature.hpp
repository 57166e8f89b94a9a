#pragma once

#include <functional>

namespace sollab {

struct QuadratureOptions {
  double tolerance = 1e-10;  // absolute
  int max_depth = 40;
};

// Adaptive Simpson with Richardson correction. Integrates from `a` to `b`
// (b < a yields the negated integral). Throws QuadratureFailure when the
// tolerance is not met within max_depth bisections or the integrand is not
// finite.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& options = {});

}  // namespace sollab
