#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "svgeom/kernels.hpp"

using namespace svgeom;

namespace {

std::vector<double> random_values(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (double& x : v) x = g(gen);
  return v;
}

}  // namespace

TEST_CASE("scalar backend is always available and listed first") {
  const auto backends = kernels::available_backends();
  REQUIRE(!backends.empty());
  CHECK(backends.front() == kernels::Backend::scalar);
  CHECK(kernels::backend_name(kernels::Backend::scalar) == "scalar");
}

TEST_CASE("dot and squared_norm match a naive loop") {
  std::mt19937_64 gen(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u}) {
    const auto a = random_values(gen, n);
    const auto b = random_values(gen, n);
    double expect = 0.0;
    double expect_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      expect += a[i] * b[i];
      expect_sq += a[i] * a[i];
    }
    CHECK(kernels::dot(kernels::Backend::scalar, a, b) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(kernels::squared_norm(kernels::Backend::scalar, a) == doctest::Approx(expect_sq).epsilon(1e-14));
  }
}

TEST_CASE("every SIMD backend agrees with the scalar reference") {
  std::mt19937_64 gen(2);
  for (auto backend : kernels::available_backends()) {
    CAPTURE(kernels::backend_name(backend));
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto a = random_values(gen, n);
      const auto b = random_values(gen, n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag += std::abs(a[i] * b[i]);
      CHECK(std::abs(kernels::dot(backend, a, b) - kernels::dot(kernels::Backend::scalar, a, b)) <=
            1e-14 * (mag + 1.0));
      CHECK(std::abs(kernels::squared_norm(backend, a) - kernels::squared_norm(kernels::Backend::scalar, a)) <=
            1e-14 * (kernels::squared_norm(kernels::Backend::scalar, a) + 1.0));

      auto y1 = b;
      auto y2 = b;
      kernels::axpy(backend, 0.37, a, y1);
      kernels::axpy(kernels::Backend::scalar, 0.37, a, y2);
      for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-15));

      auto s1 = a;
      auto s2 = a;
      kernels::scale(backend, -1.75, s1);
      kernels::scale(kernels::Backend::scalar, -1.75, s2);
      CHECK(s1 == s2);
    }
  }
}

TEST_CASE("dispatching overloads use a working backend") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{5, 4, 3, 2, 1};
  CHECK(kernels::dot(a, b) == 35.0);
  CHECK(kernels::squared_norm(a) == 55.0);
  std::vector<double> y(5, 1.0);
  kernels::axpy(2.0, a, y);
  CHECK(y == std::vector<double>{3, 5, 7, 9, 11});
  kernels::scale(0.5, y);
  CHECK(y == std::vector<double>{1.5, 2.5, 3.5, 4.5, 5.5});
}
