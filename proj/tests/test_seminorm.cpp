#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ac2cd/seminorm.hpp"
#include "support.hpp"

using namespace ac2cd;

TEST_CASE("inner product skips the excluded index") {
  const Vector e1 = Vector::Unit(3, 1);
  CHECK(inner_j(e1, e1, 1) == 0.0);
  CHECK(inner_j(Vector::LinSpaced(3, 1, 3), Vector::Ones(3), 1) == 4.0);
  for (Index j = 0; j < 3; ++j) CHECK(inner_j(Vector::Ones(3), Vector::Ones(3), j) == 2.0);
  CHECK_THROWS_AS(inner_j(Vector::Ones(3), Vector::Ones(2), 0), ContractError);
  CHECK_THROWS_AS(inner_j(Vector::Ones(3), Vector::Ones(3), 3), ContractError);
}

TEST_CASE("seminorm values") {
  CHECK(seminorm_j(Vector::Unit(4, 2), 2) == 0.0);
  CHECK(seminorm_j((Vector(3) << 3, 4, 0).finished(), 2) == 5.0);
}

TEST_CASE("reduced product identity") {
  std::mt19937_64 rng(1);
  const Vector xp = (Vector(3) << 0.2, 0.3, 0.5).finished();
  const Vector xpp = (Vector(3) << 0.6, 0.1, 0.3).finished();
  auto s = reduced_product_identity(Vector::Constant(3, 2.5), xp, xpp, 1);
  CHECK(std::abs(s.lhs) <= 1e-15);
  CHECK(std::abs(s.rhs) <= 1e-15);
  s = reduced_product_identity(Vector::Ones(3), xp, xp, 0);
  CHECK(s.lhs == 0.0);
  CHECK(s.rhs == 0.0);
  CHECK_THROWS_AS(reduced_product_identity(Vector::Ones(3), xp, 2 * xp, 0), ContractError);

  for (int t = 0; t < 1000; ++t) {
    const Index n = 5;
    const Vector v = testing_support::random_vector(n, rng);
    Vector a = testing_support::random_vector(n, rng).cwiseAbs();
    Vector b = testing_support::random_vector(n, rng).cwiseAbs();
    a /= a.sum();
    b /= b.sum();
    const Index j = std::uniform_int_distribution<Index>(0, n - 1)(rng);
    const auto r = reduced_product_identity(v, a, b, j);
    CHECK(std::abs(r.lhs - r.rhs) <= 1e-12 * (1.0 + std::abs(r.lhs)));
  }
}

TEST_CASE("seminorm inequalities on random vectors") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 1000; ++t) {
    const Index n = std::uniform_int_distribution<Index>(2, 12)(rng);
    const Index j = std::uniform_int_distribution<Index>(0, n - 1)(rng);
    const Vector x = testing_support::random_vector(n, rng);
    const Vector y = testing_support::random_vector(n, rng);
    const double nx = seminorm_j(x, j);
    CHECK(inner_j(x, y, j) <= nx * seminorm_j(y, j) * (1.0 + 1e-12));
    double sum_abs = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      CHECK(std::abs(x[i]) <= nx * (1.0 + 1e-12));
      sum_abs += std::abs(x[i]);
    }
    CHECK(sum_abs <= std::sqrt(static_cast<double>(n - 1)) * nx * (1.0 + 1e-12));
    CHECK(nx <= x.norm() * (1.0 + 1e-12));
  }
}
