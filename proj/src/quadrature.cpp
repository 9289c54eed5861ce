#include "svgeom/quadrature.hpp"

#include <cmath>

namespace svgeom {

namespace {

constexpr int min_levels = 4;  // guards against integrands that vanish on the first five nodes

struct Simpson {
  const std::function<double(double)>& f;
  int evaluations = 0;
  double error = 0.0;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double step(double a, double b, double fa, double fm, double fb, double whole, double tol, int level,
              int max_depth) {
    const double m = 0.5 * (a + b);
    const double flm = eval(0.5 * (a + m));
    const double frm = eval(0.5 * (m + b));
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (level >= max_depth || (level >= min_levels && std::abs(delta) <= 15.0 * tol)) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return step(a, m, fa, flm, fm, left, 0.5 * tol, level + 1, max_depth) +
           step(m, b, fm, frm, fb, right, 0.5 * tol, level + 1, max_depth);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                                  int max_depth) {
  Simpson s{f};
  const double fa = s.eval(a);
  const double fm = s.eval(0.5 * (a + b));
  const double fb = s.eval(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = s.step(a, b, fa, fm, fb, whole, tol, 0, max_depth);
  return {value, s.error, s.evaluations};
}

}  // namespace svgeom
