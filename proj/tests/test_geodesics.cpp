#include <doctest.h>

#include <cmath>
#include <numbers>

#include "svgeom/errors.hpp"
#include "svgeom/geodesics.hpp"
#include "svgeom/random.hpp"

using namespace svgeom;

namespace {

std::vector<double> random_speeds(StreamRng& rng, int r) {
  const Eigen::VectorXd v = random_unit_vector(rng, r);
  return {v.data(), v.data() + r};
}

std::vector<Eigen::VectorXd> random_directions(StreamRng& rng, const SpaceSpec& s) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < s.factors(); ++i) out.push_back(random_unit_vector(rng, s.n(i)));
  return out;
}

}  // namespace

TEST_CASE("geodesic specifications are validated") {
  const SpaceSpec s({1, 1}, {2, 1});
  CHECK_THROWS_AS(make_geodesic(s, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_geodesic(s, {1.0}), DomainError);
  CHECK_THROWS_AS(make_geodesic(s, {1.0, 0.0}, {0.0}), DomainError);
  Eigen::VectorXd bad = Eigen::VectorXd::Constant(1, 2.0);
  CHECK_THROWS_AS(make_geodesic(s, {1.0, 0.0}, {}, {bad, bad}), DomainError);
  CHECK_NOTHROW(make_geodesic(s, {0.6, 0.8}));
}

TEST_CASE("geodesics start at E with unit speed and stay on the sphere") {
  for (int k = 0; k < 20; ++k) {
    StreamRng rng(31, k);
    const SpaceSpec s({1 + k % 3, 2}, {1 + k % 4, 2});
    const GeodesicSpec g = make_geodesic(s, random_speeds(rng, 2), {}, random_directions(rng, s));
    CHECK((geodesic_eval(g, 0.0) - distinguished_point(s)).norm() < 1e-15);
    CHECK(geodesic_velocity_numeric(g, 1e-5).norm() == doctest::Approx(1.0).epsilon(1e-8));
    for (double t : {0.3, 1.1, 2.5}) CHECK(geodesic_eval(g, t).norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("acceleration of a geodesic has no tangential part") {
  for (int k = 0; k < 20; ++k) {
    StreamRng rng(32, k);
    const SpaceSpec s({2, 1, 1}, {1 + k % 3, 2, 1 + k % 2});
    const NormalSplit split = normal_split_E(s);
    const GeodesicSpec g = make_geodesic(s, random_speeds(rng, 3), {}, random_directions(rng, s));
    CHECK(tangential_acceleration_numeric(g, split, 1e-4) < 1e-6);
  }
}

TEST_CASE("second derivatives of the angle functions appear as tangential acceleration") {
  StreamRng rng(33, 0);
  const SpaceSpec s({2, 2}, {2, 3});
  const NormalSplit split = normal_split_E(s);
  const std::vector<double> acc{0.3, -0.4};
  const GeodesicSpec g = make_geodesic(s, random_speeds(rng, 2), acc, random_directions(rng, s));
  CHECK(tangential_acceleration_numeric(g, split, 1e-4) == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("normal curvature of geodesics matches the closed form") {
  for (int k = 0; k < 40; ++k) {
    StreamRng rng(34, k);
    const int r = 1 + k % 4;
    std::vector<int> dims, degrees;
    for (int i = 0; i < r; ++i) {
      dims.push_back(1 + static_cast<int>(rng() % 2));
      degrees.push_back(1 + static_cast<int>(rng() % 4));
    }
    const SpaceSpec s(dims, degrees);
    const NormalSplit split = normal_split_E(s);
    const auto theta = random_speeds(rng, r);
    const GeodesicSpec g = make_geodesic(s, theta, {}, random_directions(rng, s));
    CHECK(normal_curvature_numeric(g, split, 1e-4) ==
          doctest::Approx(curvature_closed_form(theta, degrees)).epsilon(1e-6));
  }
}

TEST_CASE("closed-form curvature: values and validation") {
  const int degrees[] = {3};
  const double one[] = {1.0};
  CHECK(curvature_closed_form(one, degrees) == doctest::Approx(std::sqrt(4.0 / 3.0)));
  const int seg[] = {1, 1};
  const double e1[] = {1.0, 0.0};
  const double diag[] = {std::sqrt(0.5), std::sqrt(0.5)};
  CHECK(curvature_closed_form(e1, seg) == 0.0);
  CHECK(curvature_closed_form(diag, seg) == doctest::Approx(1.0));
  const double bad[] = {1.0, 1.0};
  CHECK_THROWS_AS(curvature_closed_form(bad, seg), DomainError);
  CHECK_THROWS_AS(curvature_closed_form(one, seg), DomainError);
}

TEST_CASE("curvature lies between the extremal values") {
  for (int k = 0; k < 30; ++k) {
    StreamRng rng(35, k);
    const int r = 1 + k % 4;
    std::vector<int> degrees;
    for (int i = 0; i < r; ++i) degrees.push_back(1 + static_cast<int>(rng() % 6));
    if (r == 1 && degrees[0] == 1) degrees[0] = 2;
    const ExtremalCurvature ex = extremal_curvature(SpaceSpec(std::vector<int>(r, 1), degrees));
    CHECK(curvature_closed_form(ex.argmax, degrees) == doctest::Approx(ex.max).epsilon(1e-14));
    CHECK(curvature_closed_form(ex.argmin, degrees) == doctest::Approx(ex.min).epsilon(1e-14));
    CHECK(std::abs(ex.numeric_max - ex.max) <= 1e-9);
    CHECK(std::abs(ex.numeric_min - ex.min) <= 1e-9);
    for (int t = 0; t < 20; ++t) {
      const auto theta = random_speeds(rng, r);
      const double kappa = curvature_closed_form(theta, degrees);
      CHECK(kappa <= ex.max + 1e-14);
      CHECK(kappa >= ex.min - 1e-14);
    }
  }
}

TEST_CASE("the interior critical value on a coordinate face depends on its degree sum") {
  // On the face where only the factors in I move, the maximum is
  // sqrt(2(d'-1)/d') with d' the sum of their degrees, attained at theta_i = sqrt(d_i/d').
  const std::vector<int> degrees{1, 2, 4, 3};
  for (unsigned mask = 1; mask < 16; ++mask) {
    std::vector<int> sub;
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) sub.push_back(degrees[i]);
    int dprime = 0;
    for (int x : sub) dprime += x;
    const double expected = std::sqrt(2.0 * (dprime - 1) / dprime);
    CHECK(optimize_curvature(sub, true, 10).value == doctest::Approx(expected).epsilon(1e-12));
    std::vector<double> theta(4, 0.0);
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) theta[i] = std::sqrt(static_cast<double>(degrees[i]) / dprime);
    CHECK(curvature_closed_form(theta, degrees) == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("ties in the minimum resolve to the lowest index") {
  const ExtremalCurvature ex = extremal_curvature(SpaceSpec({1, 1, 1}, {3, 2, 2}));
  CHECK(ex.min_factor == 1);
  CHECK(ex.argmin == std::vector<double>{0.0, 1.0, 0.0});
  CHECK(ex.min == doctest::Approx(1.0));
}

TEST_CASE("reach regimes") {
  const double quarter = std::numbers::pi / 4.0;
  for (int d = 2; d <= 5; ++d) {
    const ReachReport r = reach(SpaceSpec({1}, {d}));
    CHECK(r.reach == quarter);
    CHECK(r.regime == Regime::bottleneck_limited);
  }
  for (int d : {6, 7, 8, 12, 40}) {
    const ReachReport r = reach(SpaceSpec({2, 1}, {d - 1, 1}));
    CHECK(r.reach == doctest::Approx(std::sqrt(d / (2.0 * (d - 1)))).epsilon(1e-15));
    CHECK(r.regime == Regime::curvature_limited);
  }
  CHECK(reach(SpaceSpec({1}, {6})).reach == doctest::Approx(0.774596669241483).epsilon(1e-14));
  CHECK(rho1(SpaceSpec({1, 1}, {1, 1})) == doctest::Approx(1.0));
  CHECK(regime_name(Regime::bottleneck_limited) == "bottleneck-limited");
  CHECK(regime_name(Regime::curvature_limited) == "curvature-limited");
  CHECK_THROWS_AS(reach(SpaceSpec({3}, {1})), DomainError);
  CHECK_THROWS_AS(rho2(SpaceSpec({3}, {1})), DomainError);
}

TEST_CASE("rank-one tensors with a factor orthogonal to x_0 form bottlenecks with E") {
  for (const auto& s : {SpaceSpec({1}, {2}), SpaceSpec({2, 1}, {1, 1}), SpaceSpec({1, 2, 1}, {1, 3, 1})}) {
    const BottleneckCheck b = rho2_and_bottleneck_check(s, 50, 7);
    CHECK(b.trials == 50);
    CHECK(b.passed == 50);
    CHECK(b.max_violation <= 1e-10);
    CHECK(b.rho2 == std::numbers::pi / 4.0);
  }
}
