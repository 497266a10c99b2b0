#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ac2cd/theory.hpp"
#include "ac2cd/zoo.hpp"

using namespace ac2cd;

namespace {

const Matrix& hessian(const Instance& inst) { return *inst.problem.objective().hessian(); }

}  // namespace

TEST_CASE("E1 Lipschitz table") {
  const LipschitzTable t = lipschitz_table_quadratic(Matrix::Identity(3, 3));
  CHECK(t.Lmax == doctest::Approx(2.0));
  CHECK(t.Lbar == doctest::Approx(4.0));
  CHECK(t.L == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(t.Lij(0, 0) == 0.0);
  CHECK(t.Lij(0, 1) == 2.0);
  CHECK_FALSE(t.estimate);
}

TEST_CASE("zero entries are floored") {
  // H = ones: H_ii + H_jj - 2 H_ij = 0 everywhere.
  const LipschitzTable t = lipschitz_table_quadratic(Matrix::Ones(3, 3));
  CHECK(t.Lij(0, 1) > 0.0);
  CHECK(t.Lij(0, 1) <= 1e-12);
  CHECK(t.L == doctest::Approx(3.0));
  CHECK_THROWS_AS(lipschitz_table_quadratic((Matrix(2, 2) << 1, 2, 0, 1).finished()), ContractError);
}

TEST_CASE("spectral radius matches an eigen decomposition") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const Instance inst = gen_random_designed(2 + t % 9, rng());
    const Matrix& H = hessian(inst);
    const double ref = Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues().cwiseAbs().maxCoeff();
    CHECK(spectral_radius(H) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("sampled tables recover quadratic constants") {
  const Instance inst = gen_random_designed(5, 8);
  const Matrix& H = hessian(inst);
  const LipschitzTable exact = lipschitz_table_quadratic(H);
  const Vector lo = Vector::Constant(5, -1.0);
  const Vector hi = Vector::Constant(5, 1.0);
  const LipschitzTable s1 = lipschitz_table_sampled(inst.problem.objective(), lo, hi, 50, 1.0, 3);
  const LipschitzTable s2 = lipschitz_table_sampled(inst.problem.objective(), lo, hi, 50, 1.1, 3);
  CHECK(s1.estimate);
  // phi' is linear in s for a quadratic, so every quotient is exact.
  CHECK((s1.Lij - exact.Lij).cwiseAbs().maxCoeff() <= 1e-9);
  CHECK((s2.Lij.array() >= s1.Lij.array()).all());
  CHECK(s1.L <= exact.L * (1.0 + 1e-9));

  QuadraticObjective linear(Matrix::Zero(3, 3), Vector::Ones(3));
  const LipschitzTable z = lipschitz_table_sampled(linear, Vector::Zero(3), Vector::Ones(3), 10, 1.0, 1);
  CHECK(z.Lij(0, 1) > 0.0);
}

TEST_CASE("E1 radii") {
  const Instance e1 = gen_e1();
  const auto& cert = *e1.certificate;
  const LipschitzTable t = lipschitz_table_quadratic(hessian(e1));
  CHECK(radius_j(cert, 1.0) == doctest::Approx(0.3));
  ArmijoParams ap;
  ap.A_l = 0.01;
  CHECK(radius_A(cert, t, ap) == doctest::Approx(0.3 / 102.0).epsilon(1e-9));

  const Instance interior = gen_interior_optimum(4, 1);
  CHECK_THROWS_AS(radius_A(*interior.certificate, lipschitz_table_quadratic(hessian(interior)), ap),
                  UndefinedQuantity);
}

TEST_CASE("E1 rate constants") {
  const Instance e1 = gen_e1();
  const auto& p = e1.problem;
  const LipschitzTable t = lipschitz_table_quadratic(hessian(e1));
  ArmijoParams ap;
  ap.A_l = 0.01;
  const double f0 = p.value(*e1.x0);
  CHECK(f0 == doctest::Approx(0.39));
  const RateConstants rc = rate_constants(p, t, *e1.certificate, f0, ap, 1.0);
  // Hand evaluation: T = max{100, 2 / 0.9}, R0 = sqrt(0.72), G* = 0.2 - (-0.1).
  const double R0 = std::sqrt(0.72);
  const double fdec = 100.0 * R0 + 8.0 * R0 + 0.3;
  CHECK(rc.R0 == doctest::Approx(R0).epsilon(1e-12));
  CHECK(rc.Gstar == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(rc.T == doctest::Approx(100.0));
  CHECK(rc.fdec == doctest::Approx(fdec).epsilon(1e-12));
  CHECK(rc.C == doctest::Approx(3.0 * 2.0 * fdec * fdec / 0.2).epsilon(1e-12));
  CHECK_FALSE(rc.R0_estimated);

  CHECK_THROWS_AS(rate_constants(p, t, *e1.certificate, f0, ap, 0.0), ContractError);
  RateOptions ro;
  ro.level_set_samples = 200;
  const RateConstants est = rate_constants(p, t, *e1.certificate, f0, ap, 0.0, ro, &*e1.x0);
  CHECK(est.R0_estimated);
  CHECK(est.R0 > 0.0);
  // A sampled lower estimate never exceeds the strong-convexity radius.
  CHECK(est.R0 <= rc.R0 + 1e-12);
}

TEST_CASE("complexity bounds") {
  RateConstants rc;
  rc.C = 10.0;
  rc.mu = 2.0;
  // Radii chosen as powers of two so the reciprocals are exact.
  const ComplexityBounds b = complexity_bounds(rc, {0.5, 0.125}, 0.4);
  CHECK(b.kA_bound == 641.0);
  CHECK(b.kN_bound == std::floor(10.0 / 0.16) + 1.0);
  rc.mu = 0.0;
  CHECK_THROWS_AS(complexity_bounds(rc, {0.5, 0.125}, 0.4), ContractError);
  CHECK_THROWS_WITH(kN_bound_value(rc, 0.4), doctest::Contains("strong convexity"));
}

TEST_CASE("lemma suite holds with exact tables and flags corrupted ones") {
  const Instance e1 = gen_e1();
  const LipschitzTable t = lipschitz_table_quadratic(hessian(e1));
  const LemmaReport ok = lemma_suite(e1.problem, t, 1000, 5);
  CHECK(ok.violations() == 0);
  CHECK(ok.worst_lips_const <= 1e-9);
  const LemmaReport bad = lemma_suite(e1.problem, scaled_table(t, 0.5), 1000, 5);
  CHECK(bad.violations() > 0);

  std::mt19937_64 rng(6);
  for (int k = 0; k < 10; ++k) {
    const Instance inst = gen_random_designed(3 + k % 8, rng());
    const LemmaReport r = lemma_suite(inst.problem, lipschitz_table_quadratic(hessian(inst)), 300, k);
    CHECK(r.violations() == 0);
  }
}
