#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "svgeom/bw_algebra.hpp"
#include "svgeom/errors.hpp"
#include "svgeom/random.hpp"

using namespace svgeom;

namespace {

// Raw monomial coefficients to orthonormal coefficients: c_alpha = raw / sqrt(mult).
Tensor from_raw(const SpaceSpec& s, const std::map<std::vector<int>, double>& raw) {
  Tensor t(s);
  const MonomialTable& tab = s.table(0);
  for (const auto& [alpha, v] : raw) {
    const std::size_t r = tab.rank(alpha);
    t[r] = v / tab.sqrt_multinomial(r);
  }
  return t;
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("binomial and multinomial coefficients") {
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(10, 0) == 1);
  CHECK(binomial(10, 10) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(60, 30) == 118264581564861424ULL);
  CHECK_THROWS_AS(binomial(200, 100), ResourceError);
  const int a[] = {2, 1};
  CHECK(multinomial(a) == 3.0);
  const int b[] = {1, 1, 1};
  CHECK(multinomial(b) == 6.0);
  const int c[] = {3, 0, 2, 1};
  CHECK(multinomial(c) == static_cast<double>(factorial(6) / (factorial(3) * factorial(2))));
}

TEST_CASE("monomials are listed in descending lexicographic order") {
  const MonomialTable t(2, 2);
  REQUIRE(t.size() == 6);
  const std::vector<std::vector<int>> expected{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  for (std::size_t r = 0; r < 6; ++r) {
    const auto e = t.exponents(r);
    CHECK(std::vector<int>(e.begin(), e.end()) == expected[r]);
    CHECK(t.rank(expected[r]) == r);
  }
  CHECK(t.sqrt_multinomial(1) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("rank and unrank are inverse bijections") {
  for (int n = 0; n <= 4; ++n) {
    for (int d = 0; d <= 5; ++d) {
      const MonomialTable t(n, d);
      CHECK(t.size() == binomial(n + d, n));
      for (std::size_t r = 0; r < t.size(); ++r) {
        const MultiIndex m = basis_unrank(r, n, d);
        CHECK(m.degree() == d);
        CHECK(basis_rank(m, n, d) == r);
        const auto e = t.exponents(r);
        CHECK(m.entries == std::vector<int>(e.begin(), e.end()));
      }
    }
  }
}

TEST_CASE("tangent monomials x_0^{d-1} x_k have rank k") {
  for (int n = 1; n <= 4; ++n) {
    for (int d = 1; d <= 4; ++d) {
      for (int k = 1; k <= n; ++k) {
        std::vector<int> alpha(n + 1, 0);
        alpha[0] = d - 1;
        alpha[k] = 1;
        CHECK(basis_rank(MultiIndex{alpha}, n, d) == static_cast<std::size_t>(k));
      }
    }
  }
}

TEST_CASE("invalid multi-indices and ranks are rejected") {
  const MonomialTable t(2, 3);
  CHECK_THROWS_AS(t.rank(std::vector<int>{1, 1}), DomainError);
  CHECK_THROWS_AS(t.rank(std::vector<int>{1, 1, 0}), DomainError);
  CHECK_THROWS_AS(t.rank(std::vector<int>{4, -1, 0}), DomainError);
  CHECK_THROWS_AS(basis_unrank(10, 2, 3), DomainError);
}

TEST_CASE("space specification validation") {
  CHECK_THROWS_AS(SpaceSpec({}, {}), DomainError);
  CHECK_THROWS_AS(SpaceSpec({1, 2}, {1}), DomainError);
  CHECK_THROWS_AS(SpaceSpec({0}, {2}), DomainError);
  CHECK_THROWS_AS(SpaceSpec({1}, {0}), DomainError);
  CHECK_THROWS_AS(SpaceSpec({30, 30}, {10, 10}), ResourceError);
  const SpaceSpec s({2, 1}, {2, 3});
  CHECK(s.dim() == 3);
  CHECK(s.total_degree() == 5);
  CHECK(s.ambient_dim() == 6 * 4);
  CHECK(s.sphere_dim() == 23);
  CHECK(s.codim() == 20);
  CHECK(s.stride(1) == 1);
  CHECK(s.stride(0) == 4);
}

TEST_CASE("flat indices round trip with the first factor most significant") {
  const SpaceSpec s({2, 1, 3}, {2, 2, 1});
  std::vector<std::size_t> ranks(3);
  for (std::size_t flat = 0; flat < s.ambient_dim(); ++flat) {
    s.unflatten(flat, ranks);
    CHECK(s.flat_index(ranks) == flat);
    CHECK(flat == ranks[0] * s.factor_dim(1) * s.factor_dim(2) + ranks[1] * s.factor_dim(2) + ranks[2]);
  }
}

TEST_CASE("Bombieri-Weyl norms of known polynomials") {
  const SpaceSpec s({1}, {2});
  // (x0 + x1)^2 = x0^2 + 2 x0 x1 + x1^2 has norm^2 = |l|^4 = 4.
  const Tensor f = from_raw(s, {{{2, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, 1.0}});
  CHECK(bw_inner(f, f) == doctest::Approx(4.0));
  // x0 x1 alone: 1 / C(2,1) = 1/2.
  const Tensor g = from_raw(s, {{{1, 1}, 1.0}});
  CHECK(bw_inner(g, g) == doctest::Approx(0.5));
  CHECK(bw_inner(f, g) == doctest::Approx(1.0));
}

TEST_CASE("reproducing kernel: <f, l^d> = f(l)") {
  for (int k = 0; k < 30; ++k) {
    StreamRng rng(11, k);
    const int n = 1 + k % 3;
    const int d = 1 + k % 4;
    const SpaceSpec s({n}, {d});
    const Tensor f = gaussian_tensor(s, k);
    const LinearForm l = gaussian_vector(rng, n + 1);
    // l^d expanded directly from the multinomial theorem.
    Tensor ld(s);
    const MonomialTable& t = s.table(0);
    for (std::size_t r = 0; r < t.size(); ++r) {
      const auto alpha = t.exponents(r);
      double raw = multinomial(alpha);
      for (int v = 0; v <= n; ++v) raw *= std::pow(l(v), alpha[v]);
      ld[r] = raw / t.sqrt_multinomial(r);
    }
    CHECK(bw_inner(f, ld) == doctest::Approx(evaluate(f, l)).epsilon(1e-12));
  }
}

TEST_CASE("orthogonal invariance of the inner product") {
  for (int k = 0; k < 20; ++k) {
    StreamRng rng(12, k);
    const SpaceSpec s({1 + k % 3, 2}, {1 + k % 3, 2});
    const Tensor f = gaussian_tensor(s, 2 * k);
    const Tensor g = gaussian_tensor(s, 2 * k + 1);
    std::vector<Eigen::MatrixXd> qs{random_orthogonal(rng, s.n(0) + 1), random_orthogonal(rng, s.n(1) + 1)};
    const double before = bw_inner(f, g);
    const double after = bw_inner(apply_orthogonal(f, qs), apply_orthogonal(g, qs));
    CHECK(std::abs(before - after) <= 1e-10 * f.norm() * g.norm());
  }
}

TEST_CASE("induced action is orthogonal and composes with evaluation") {
  StreamRng rng(13, 0);
  const Eigen::MatrixXd q = random_orthogonal(rng, 3);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-12);
  const Eigen::MatrixXd a = induced_action(q, 3);
  CHECK((a.transpose() * a - Eigen::MatrixXd::Identity(a.rows(), a.rows())).norm() < 1e-10);
  const SpaceSpec s({2}, {3});
  const Tensor f = gaussian_tensor(s, 5);
  std::vector<Eigen::MatrixXd> qs{q};
  const Tensor fq = apply_orthogonal(f, qs);
  const LinearForm l = gaussian_vector(rng, 3);
  CHECK(evaluate(fq, l) == doctest::Approx(evaluate(f, q * l)).epsilon(1e-10));
  Eigen::MatrixXd bad = q;
  bad(0, 0) += 1e-3;
  std::vector<Eigen::MatrixXd> bads{bad};
  CHECK_THROWS_AS(apply_orthogonal(f, bads), DomainError);
}

TEST_CASE("angular distance needs unit tensors") {
  const SpaceSpec s({1}, {2});
  const Tensor e = Tensor::basis(s, 0);
  const Tensor m = Tensor::basis(s, 1);
  CHECK(angular_distance(e, m) == doctest::Approx(std::acos(0.0)));
  CHECK(angular_distance(e, e) == doctest::Approx(0.0));
  CHECK_THROWS_AS(angular_distance(e * 2.0, m), DomainError);
}

TEST_CASE("gaussian tensors are a pure function of the seed") {
  const SpaceSpec s({2, 2}, {2, 1});
  CHECK(gaussian_tensor(s, 9).values() == gaussian_tensor(s, 9).values());
  CHECK(gaussian_tensor(s, 9).values() != gaussian_tensor(s, 10).values());
}

TEST_CASE("tensor arithmetic") {
  const SpaceSpec s({1}, {1});
  Tensor a(s, {1.0, 2.0});
  Tensor b(s, {3.0, -1.0});
  CHECK((a + b).values() == std::vector<double>{4.0, 1.0});
  CHECK((a - b).values() == std::vector<double>{-2.0, 3.0});
  CHECK((2.0 * a).values() == std::vector<double>{2.0, 4.0});
  CHECK(a.norm() == doctest::Approx(std::sqrt(5.0)));
  CHECK(a.normalized().norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Tensor(s).normalized(), DomainError);
  CHECK_THROWS_AS(Tensor(s, {1.0}), DomainError);
  const SpaceSpec t({2}, {1});
  CHECK_THROWS_AS(bw_inner(a, Tensor(t)), DomainError);
}

TEST_CASE("tensor product places factors with the first most significant") {
  const SpaceSpec s({1, 1}, {1, 1});
  const std::vector<std::vector<double>> factors{{1.0, 2.0}, {3.0, 5.0}};
  const Tensor t = tensor_product(s, factors);
  CHECK(t.values() == std::vector<double>{3.0, 5.0, 6.0, 10.0});
}
