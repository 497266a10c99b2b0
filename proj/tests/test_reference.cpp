#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ac2cd/reference.hpp"
#include "ac2cd/zoo.hpp"
#include "support.hpp"

using namespace ac2cd;
using testing_support::max_abs_diff;

TEST_CASE("E1 by enumeration") {
  const Instance e1 = gen_e1();
  const SolutionCertificate c = solve_qp_enumerate(e1.problem);
  const Vector c0 = (Vector(3) << 0.5, 0.7, -0.2).finished();
  CHECK(max_abs_diff(c.x_star, testing_support::simplex_projection_bisect(c0)) <= 1e-12);
  CHECK(max_abs_diff(c.x_star, (Vector(3) << 0.4, 0.6, 0.0).finished()) <= 1e-12);
  CHECK(c.lambda_star == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(c.f_star == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(c.condition_estimate.has_value());
}

TEST_CASE("symmetric two-variable problem") {
  auto f = std::make_shared<QuadraticObjective>(Matrix::Identity(2, 2), Vector::Zero(2));
  BoxSimplexProblem p(Vector::Zero(2), Vector::Ones(2), 1.0, f);
  const SolutionCertificate c = solve_qp_enumerate(p);
  CHECK(max_abs_diff(c.x_star, Vector::Constant(2, 0.5)) <= 1e-12);
  CHECK(c.lambda_star == doctest::Approx(0.5));
  CHECK(c.active.empty());
}

TEST_CASE("degenerate design gives a strict subset of the active set") {
  const Instance d = gen_degenerate(5, 3);
  const SolutionCertificate c = solve_qp_enumerate(d.problem);
  CHECK(c.active.size() == 2);
  CHECK(c.strict_active == std::vector<Index>{0});
}

TEST_CASE("enumeration preconditions") {
  auto f = std::make_shared<QuadraticObjective>((Matrix(2, 2) << 1, 0, 0, -1).finished(), Vector::Zero(2));
  BoxSimplexProblem indefinite(Vector::Zero(2), Vector::Ones(2), 1.0, f);
  CHECK_THROWS_AS(solve_qp_enumerate(indefinite), ContractError);

  auto big = std::make_shared<QuadraticObjective>(Matrix::Identity(15, 15), Vector::Zero(15));
  BoxSimplexProblem large(Vector::Zero(15), Vector::Ones(15), 1.0, big);
  CHECK_THROWS_AS(solve_qp_enumerate(large), ContractError);
}

TEST_CASE("simplex projection") {
  CHECK(max_abs_diff(simplex_projection((Vector(3) << 0.5, 0.7, -0.2).finished()),
                     (Vector(3) << 0.4, 0.6, 0.0).finished()) <= 1e-15);
  const Vector on = (Vector(4) << 0.1, 0.2, 0.3, 0.4).finished();
  CHECK(max_abs_diff(simplex_projection(on), on) <= 1e-15);
  for (double t : {-3.0, 0.0, 0.7, 100.0}) {
    CHECK(max_abs_diff(simplex_projection(Vector::Constant(5, t)), Vector::Constant(5, 0.2)) <= 1e-12);
  }
}

TEST_CASE("projected gradient reference") {
  const Instance e1 = gen_e1();
  const Vector xs = (Vector(3) << 0.4, 0.6, 0.0).finished();
  CHECK(max_abs_diff(projected_gradient_reference(e1.problem, *e1.x0, 1e-12), xs) <= 1e-10);
  CHECK(projected_gradient_reference(e1.problem, xs, 1e-12) == xs);
  CHECK(max_abs_diff(projected_gradient_reference(e1.problem, *e1.x0, 1e-4), xs) <= 1e-3);
  // On E1 a unit step lands on x* at once, so the cap is exercised elsewhere.
  const Instance d = gen_random_designed(8, 5);
  CHECK_THROWS_AS(projected_gradient_reference(d.problem, *d.x0, 1e-14, 1), NumericalError);
}

TEST_CASE("oracles agree on random simplex instances") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 60; ++t) {
    const Index n = 2 + t % 9;
    const Vector c = testing_support::random_vector(n, rng);
    const Instance inst = gen_simplex_projection(c);
    const SolutionCertificate e = solve_qp_enumerate(inst.problem);
    const Vector proj = simplex_projection(c);
    const Vector pg = projected_gradient_reference(inst.problem, *inst.x0, 1e-12);
    CHECK(max_abs_diff(e.x_star, proj) <= 1e-9);
    CHECK(max_abs_diff(pg, proj) <= 1e-9);
    CHECK(kkt_certificate(inst.problem, e.x_star, 1e-10).residual <= 1e-9);
  }
}
