#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ac2cd/line_search.hpp"
#include "ac2cd/zoo.hpp"

using namespace ac2cd;

namespace {

const Vector kX0 = (Vector(3) << 1.0, 0.0, 0.0).finished();

BoxSimplexProblem box_problem(double lo, double hi, double b) {
  auto f = std::make_shared<QuadraticObjective>(Matrix::Identity(2, 2), Vector::Zero(2));
  return BoxSimplexProblem(Vector::Constant(2, lo), Vector::Constant(2, hi), b, f);
}

}  // namespace

TEST_CASE("maximum feasible stepsize") {
  const auto p = gen_e1().problem;
  // W1: g = 1.2, min{inf, 1} / 1.2.
  CHECK(max_feasible_stepsize(p, kX0, 1, 0, 1.2) == doctest::Approx(1.0 / 1.2).epsilon(1e-12));
  CHECK(max_feasible_stepsize(p, kX0, 1, 0, 0.0) == 0.0);
  CHECK_THROWS_AS(max_feasible_stepsize(p, kX0, 0, 0, 1.0), ContractError);

  const auto free = box_problem(-kInf, kInf, 0.0);
  CHECK(std::isinf(max_feasible_stepsize(free, Vector::Zero(2), 0, 1, 1.0)));

  // g < 0 uses z_p - l_p and u_j - z_j.
  const auto box = box_problem(0.0, 1.0, 1.0);
  const Vector z = (Vector(2) << 0.3, 0.7).finished();
  CHECK(max_feasible_stepsize(box, z, 0, 1, -2.0) == doctest::Approx(0.15));
}

TEST_CASE("interiority cap, all four cases") {
  const auto p = gen_e1().problem;
  // W1: D_j = z_j - l_j = 1, g > 0.
  CHECK(interiority_cap(p, kX0, 0, 1.2, 0.5) == doctest::Approx(0.5 / 1.2).epsilon(1e-12));

  const auto box = box_problem(0.0, 1.0, 1.0);
  // g < 0 and D_j = u_j - z_j: (1 - eps) D / |g|.
  Vector z = (Vector(2) << 0.2, 0.8).finished();
  CHECK(interiority_cap(box, z, 1, -2.0, 0.5) == doctest::Approx(0.05));
  // g < 0 and D_j = z_j - l_j: (u_j - z_j - eps D) / |g|.
  z << 0.7, 0.3;
  CHECK(interiority_cap(box, z, 1, -2.0, 0.5) == doctest::Approx(0.275));
  // g > 0 and D_j = u_j - z_j: (z_j - l_j - eps D) / g.
  z << 0.2, 0.8;
  CHECK(interiority_cap(box, z, 1, 2.0, 0.5) == doctest::Approx(0.35));

  CHECK_THROWS_AS(interiority_cap(box, z, 1, 0.0, 0.5), ContractError);
  z << 1.0, 0.0;
  CHECK_THROWS_AS(interiority_cap(box, z, 1, 1.0, 0.5), ContractError);
}

TEST_CASE("interiority cap shrinks as epsilon grows and never undercuts the floor") {
  const auto box = box_problem(0.0, 1.0, 1.0);
  const Vector z = (Vector(2) << 0.35, 0.65).finished();
  double prev = kInf;
  for (double eps = 0.05; eps < 1.0; eps += 0.05) {
    for (double g : {-3.0, -0.5, 0.5, 3.0}) {
      const double cap = interiority_cap(box, z, 1, g, eps);
      CHECK(cap >= (1.0 - eps) * 0.35 / std::abs(g) - 1e-15);
    }
    const double cap = interiority_cap(box, z, 1, 1.0, eps);
    CHECK(cap < prev);
    prev = cap;
  }
}

TEST_CASE("choice of A") {
  const auto p = gen_e1().problem;
  ArmijoParams ip;
  CHECK(choose_A(p, kX0, 1, 0, 1.2, ip) == doctest::Approx(0.41667).epsilon(1e-5));
  CHECK(choose_A(p, kX0, 1, 0, 0.0, ip) == ip.A_u);
  ArmijoParams fc;
  fc.strategy = StepStrategy::FixedClamp;
  CHECK(choose_A(p, kX0, 1, 0, 1.2, fc) == fc.A_u);
  // Unbounded j coordinate: the cap is infinite and A falls back to A_u.
  const auto free = box_problem(-kInf, kInf, 0.0);
  CHECK(choose_A(free, Vector::Zero(2), 0, 1, 1.0, ip) == ip.A_u);
}

TEST_CASE("Armijo backtracking") {
  const auto p = gen_e1().problem;
  ArmijoParams ap;
  Vector d = Vector::Zero(3);
  d[1] = 1.2;
  d[0] = -1.2;
  // W1: accepted at the first trial.
  const double Delta = 0.5 / 1.2;
  StepRecord r = armijo(p, kX0, d, Delta, -1.44, ap);
  CHECK(r.alpha == doctest::Approx(Delta));
  CHECK(r.backtracks == 0);

  r = armijo(p, kX0, d, 0.0, -1.44, ap);
  CHECK(r.alpha == 0.0);
  CHECK(r.backtracks == 0);

  // With H = I the Armijo test along g (e_p - e_j) accepts alpha <= 1 - gamma.
  Vector z = Vector::Zero(2);
  Vector dd = (Vector(2) << 1.0, -1.0).finished();
  auto fq = std::make_shared<QuadraticObjective>(Matrix::Identity(2, 2), (Vector(2) << -0.5, 0.5).finished());
  BoxSimplexProblem q(Vector::Constant(2, -kInf), Vector::Constant(2, kInf), 0.0, fq);
  // g = grad_1 - grad_0 = 1, d = e_0 - e_1.
  r = armijo(q, z, dd, 1.0, -1.0, ap);
  CHECK(r.backtracks == 1);
  CHECK(r.alpha == doctest::Approx(0.5));
  r = armijo(q, z, dd, 0.85, -1.0, ap);
  CHECK(r.backtracks == 0);

  // An inconsistent directional derivative exhausts the backtracks.
  CHECK_THROWS_AS(armijo(q, z, dd, 1.0, -1e6, ap), LineSearchError);
}

TEST_CASE("parameter validation") {
  ArmijoParams ap;
  CHECK_NOTHROW(ap.validate());
  ap.gamma = 1.0;
  CHECK_THROWS_AS(ap.validate(), ContractError);
  ap = {};
  ap.A_l = 2.0;
  CHECK_THROWS_AS(ap.validate(), ContractError);
  ap = {};
  ap.epsilon = 0.0;
  CHECK_THROWS_AS(ap.validate(), ContractError);
}
