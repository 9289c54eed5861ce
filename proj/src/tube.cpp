#include "svgeom/tube.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "svgeom/errors.hpp"
#include "svgeom/geodesics.hpp"
#include "svgeom/quadrature.hpp"

namespace svgeom {

std::string_view exponent_name(ExponentConvention c) {
  return c == ExponentConvention::corrected ? "corrected" : "paper";
}

double sphere_volume(int k) {
  if (k < 0) throw DomainError("sphere dimension must be nonnegative");
  const double h = 0.5 * (k + 1);
  return 2.0 * std::exp(h * std::log(std::numbers::pi) - std::lgamma(h));
}

double volume_X(const SpaceSpec& space) {
  double v = std::pow(0.5, space.factors() - 1);
  for (int i = 0; i < space.factors(); ++i) {
    v *= std::pow(static_cast<double>(space.d(i)), 0.5 * space.n(i)) * sphere_volume(space.n(i));
  }
  return v;
}

double sin_cos_integral(int a, int b, double eps, JMethod method) {
  if (!(eps > 0.0 && eps <= std::numbers::pi / 2.0)) throw DomainError("epsilon must lie in (0, pi/2]");
  if (a < 0 || b < 0) throw DomainError("exponents must be nonnegative");
  if (method == JMethod::closed_form) {
    // Substituting t = sin^2 turns the integral into half an incomplete beta.
    const double s = std::sin(eps);
    return 0.5 * boost::math::beta(0.5 * (a + 1), 0.5 * (b + 1), s * s);
  }
  auto f = [a, b](double phi) { return std::pow(std::sin(phi), a) * std::pow(std::cos(phi), b); };
  return adaptive_simpson(f, 0.0, eps, 1e-12).value;
}

double J_integral(int i, const SpaceSpec& space, double eps, ExponentConvention convention, JMethod method) {
  const int n = space.dim();
  const auto c = static_cast<int>(space.codim());
  if (i < 0 || 2 * i > n) throw DomainError("need 0 <= 2i <= n");
  const int a = (convention == ExponentConvention::corrected ? c - 1 : c) + 2 * i;
  if (a < 0) throw DomainError("codimension 0 has no tube");
  return sin_cos_integral(a, n - 2 * i, eps, method);
}

double lambda_moment(int i, int c) {
  if (i < 0) throw DomainError("moment order must be nonnegative");
  if (i == 0) return 1.0;
  if (c < 1) throw DomainError("normal dimension must be positive");
  return std::exp(i * std::log(2.0) + std::lgamma(i + 0.5 * c) - std::lgamma(0.5 * c));
}

double a_coefficient(int i, const SpaceSpec& space, const VarianceProfile& profile, MinorMode mode) {
  if (i == 0) return 1.0;
  const auto c = static_cast<int>(space.codim());
  return expected_minor_sum(space, i, profile, mode) / lambda_moment(i, c);
}

TubeReport tube_volume(const SpaceSpec& space, double eps, const TubeOptions& options) {
  const auto c = static_cast<int>(space.codim());
  if (c < 1) throw DomainError("codimension 0 has no tube");
  const auto profile = VarianceProfile::of_kind(options.profile, space.degrees());
  TubeReport rep{space, eps, options, volume_X(space), sphere_volume(c - 1), 0.0, {}, false};
  const double scale = rep.volume_X * rep.normal_sphere_volume;
  for (int i = 0; 2 * i <= space.dim(); ++i) {
    TubeTerm t{i, a_coefficient(i, space, profile, options.minor_mode),
               J_integral(i, space, eps, options.exponent), 0.0};
    t.contribution = scale * t.a * t.J;
    rep.volume += t.contribution;
    rep.terms.push_back(t);
  }
  rep.valid = space.total_degree() >= 2 && eps < reach(space).reach;
  return rep;
}

}  // namespace svgeom
