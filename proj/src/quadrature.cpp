#include "sollab/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "sollab/errors.hpp"

namespace sollab {
namespace {

// Small fixed number of unconditional bisections so that an integrand which
// happens to interpolate a parabola on the five coarsest nodes is not accepted
// blindly.
constexpr int kMinDepth = 3;

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;

  double sample(double x) const {
    const double v = f(x);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrand is not finite at " << x;
      throw QuadratureFailure(msg.str());
    }
    return v;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = sample(lm);
    const double frm = sample(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= kMinDepth && std::abs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth) {
      std::ostringstream msg;
      msg << "adaptive Simpson did not reach tolerance on [" << a << ", " << b << "] within "
          << max_depth << " subdivisions";
      throw QuadratureFailure(msg.str());
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw PreconditionError("quadrature tolerance must be positive");
  }
  if (a == b) {
    return 0.0;
  }
  if (b < a) {
    return -adaptive_simpson(f, b, a, options);
  }
  const Simpson s{f, options.max_depth};
  const double fa = s.sample(a);
  const double fb = s.sample(b);
  const double m = 0.5 * (a + b);
  const double fm = s.sample(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return s.refine(a, b, fa, fm, fb, whole, options.tolerance, 0);
}

}  // namespace sollab
