#include <doctest.h>

#include <cmath>
#include <numbers>

#include "svgeom/errors.hpp"
#include "svgeom/geodesics.hpp"
#include "svgeom/random.hpp"
#include "svgeom/tube.hpp"

using namespace svgeom;

namespace {

constexpr double pi = std::numbers::pi;

const std::vector<SpaceSpec>& sample_spaces() {
  static const std::vector<SpaceSpec> spaces{SpaceSpec({1}, {2}), SpaceSpec({1}, {3}), SpaceSpec({2}, {2}),
                                             SpaceSpec({1, 1}, {1, 1}), SpaceSpec({2, 2}, {1, 1}),
                                             SpaceSpec({2, 1}, {2, 3}), SpaceSpec({1, 1, 1}, {1, 1, 1}),
                                             SpaceSpec({3}, {4})};
  return spaces;
}

}  // namespace

TEST_CASE("unit sphere volumes") {
  CHECK(sphere_volume(0) == doctest::Approx(2.0));
  CHECK(sphere_volume(1) == doctest::Approx(2 * pi));
  CHECK(sphere_volume(2) == doctest::Approx(4 * pi));
  CHECK(sphere_volume(3) == doctest::Approx(2 * pi * pi));
  CHECK(sphere_volume(4) == doctest::Approx(8 * pi * pi / 3));
  CHECK(std::isfinite(sphere_volume(200)));
  CHECK(sphere_volume(200) > 0.0);
  CHECK_THROWS_AS(sphere_volume(-1), DomainError);
}

TEST_CASE("volume of the manifold") {
  CHECK(volume_X(SpaceSpec({1}, {2})) == doctest::Approx(2 * std::sqrt(2.0) * pi));
  CHECK(volume_X(SpaceSpec({1, 1}, {1, 1})) == doctest::Approx(2 * pi * pi));
  CHECK(volume_X(SpaceSpec({2, 1}, {2, 3})) == doctest::Approx(2.0 * std::sqrt(3.0) * 4 * pi * 2 * pi / 2));
  CHECK(volume_X(SpaceSpec({3}, {1})) == doctest::Approx(sphere_volume(3)));
}

TEST_CASE("sin-cos integrals: closed form and quadrature agree") {
  CHECK(sin_cos_integral(1, 1, 0.7) == doctest::Approx(0.5 * std::sin(0.7) * std::sin(0.7)).epsilon(1e-14));
  CHECK(sin_cos_integral(2, 0, 0.7) == doctest::Approx(0.35 - std::sin(1.4) / 4).epsilon(1e-14));
  CHECK(sin_cos_integral(0, 3, pi / 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  for (int k = 0; k < 50; ++k) {
    StreamRng rng(51, k);
    const int a = static_cast<int>(rng() % 25);
    const int b = static_cast<int>(rng() % 12);
    const double eps = 1e-3 + (pi / 2 - 1e-3) * std::uniform_real_distribution<double>(0, 1)(rng);
    const double closed = sin_cos_integral(a, b, eps, JMethod::closed_form);
    const double quad = sin_cos_integral(a, b, eps, JMethod::quadrature);
    CAPTURE(a);
    CAPTURE(b);
    CAPTURE(eps);
    CHECK(std::abs(closed - quad) <= 1e-10);
  }
  CHECK_THROWS_AS(sin_cos_integral(1, 1, 0.0), DomainError);
  CHECK_THROWS_AS(sin_cos_integral(1, 1, 1.6), DomainError);
  CHECK_THROWS_AS(sin_cos_integral(-1, 1, 0.5), DomainError);
}

TEST_CASE("J integrals under both exponent conventions") {
  const SpaceSpec v12({1}, {2});  // c = 1, n = 1
  CHECK(J_integral(0, v12, pi / 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(J_integral(0, v12, pi / 2, ExponentConvention::paper) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(J_integral(1, v12, 0.3), DomainError);
  for (const auto& s : sample_spaces()) {
    for (int i = 0; 2 * i <= s.dim(); ++i) {
      for (auto conv : {ExponentConvention::corrected, ExponentConvention::paper}) {
        CHECK(std::abs(J_integral(i, s, 0.4, conv, JMethod::closed_form) -
                       J_integral(i, s, 0.4, conv, JMethod::quadrature)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("chi-square moments") {
  for (int c = 1; c <= 30; ++c) {
    CHECK(lambda_moment(0, c) == 1.0);
    CHECK(lambda_moment(1, c) == doctest::Approx(c).epsilon(1e-13));
    CHECK(lambda_moment(2, c) == doctest::Approx(c * (c + 2.0)).epsilon(1e-13));
    CHECK(lambda_moment(3, c) == doctest::Approx(c * (c + 2.0) * (c + 4.0)).epsilon(1e-13));
  }
  CHECK(std::isfinite(lambda_moment(5, 5000)));
  CHECK_THROWS_AS(lambda_moment(1, 0), DomainError);
}

TEST_CASE("tube coefficients") {
  const auto prof = [](const SpaceSpec& s, ProfileKind k) { return VarianceProfile::of_kind(k, s.degrees()); };
  for (const auto& s : sample_spaces()) CHECK(a_coefficient(0, s, prof(s, ProfileKind::def_d)) == 1.0);
  const SpaceSpec seg({1, 1}, {1, 1});
  CHECK(a_coefficient(1, seg, prof(seg, ProfileKind::weingarten)) == doctest::Approx(-1.0));
  const SpaceSpec v22({2}, {2});  // c = 3
  CHECK(a_coefficient(1, v22, prof(v22, ProfileKind::weingarten)) == doctest::Approx(-1.0 / 6.0));
  CHECK(a_coefficient(1, v22, prof(v22, ProfileKind::def_d)) == doctest::Approx(-2.0 / 3.0));
}

TEST_CASE("tube volume closed forms") {
  const SpaceSpec v12({1}, {2});
  TubeOptions literal;
  literal.exponent = ExponentConvention::paper;
  for (double eps : {0.05, 0.1, 0.3, 0.7}) {
    const TubeReport r = tube_volume(v12, eps);
    CHECK(r.volume == doctest::Approx(4 * std::sqrt(2.0) * pi * std::sin(eps)).epsilon(1e-13));
    CHECK(r.terms.size() == 1);
    CHECK(tube_volume(v12, eps, literal).volume ==
          doctest::Approx(2 * std::sqrt(2.0) * pi * std::sin(eps) * std::sin(eps)).epsilon(1e-13));
  }
  const SpaceSpec seg({1, 1}, {1, 1});
  const TubeReport r = tube_volume(seg, 0.2);
  CHECK(r.volume == doctest::Approx(2 * pi * pi * std::sin(0.4)).epsilon(1e-13));
  REQUIRE(r.terms.size() == 2);
  CHECK(r.terms[0].a == 1.0);
  CHECK(r.terms[1].a == doctest::Approx(-1.0));
  CHECK(r.terms[0].contribution + r.terms[1].contribution == doctest::Approx(r.volume).epsilon(1e-15));
  CHECK(r.valid);
  CHECK(r.options.profile == ProfileKind::weingarten);
}

TEST_CASE("tube volume invariants on a grid of radii") {
  for (const auto& s : sample_spaces()) {
    const double tau = reach(s).reach;
    double prev = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double eps = tau * k / 21.0;
      const TubeReport r = tube_volume(s, eps);
      CHECK(r.valid);
      CHECK(r.volume >= 0.0);
      CHECK(r.volume >= prev);
      CHECK(r.volume <= sphere_volume(static_cast<int>(s.sphere_dim())));
      prev = r.volume;
    }
    CHECK_FALSE(tube_volume(s, std::min(tau * 1.01, pi / 2)).valid);
  }
}

TEST_CASE("leading Weyl term recovers the volume of the manifold") {
  for (const auto& s : sample_spaces()) {
    const int c = static_cast<int>(s.codim());
    const double eps = 1e-2;
    const double ratio = tube_volume(s, eps).volume / (sphere_volume(c - 1) * sin_cos_integral(c - 1, 0, eps));
    CHECK(ratio == doctest::Approx(volume_X(s)).epsilon(0.01));
  }
}

TEST_CASE("codimension zero has no tube") {
  CHECK_THROWS_AS(tube_volume(SpaceSpec({2}, {1}), 0.1), DomainError);
  CHECK_THROWS_AS(J_integral(0, SpaceSpec({2}, {1}), 0.1), DomainError);
}
