#pragma once

#include <cstdint>
#include <optional>

#include "ac2cd/line_search.hpp"
#include "ac2cd/problem.hpp"

namespace ac2cd {

/// Local Lipschitz constants of the pairwise directional derivatives.
struct LipschitzTable {
  double L = 0.0;     // global Lipschitz constant of the gradient
  Matrix Lij;         // symmetric, zero diagonal, positive off-diagonal
  double Lmax = 0.0;  // max L_ij
  Vector Lj;          // column sums of Lij
  double Lbar = 0.0;  // max L_j
  bool estimate = false;
};

/// Builds the derived fields from raw pairwise constants. Zero off-diagonal
/// entries are floored to 1e-12 times the largest entry.
LipschitzTable finalize_table(Matrix Lij, double L, bool estimate);

/// Largest |eigenvalue| of a symmetric matrix by power iteration.
double spectral_radius(const Matrix& H, double rel_tol = 1e-10, int max_iter = 100000);

LipschitzTable lipschitz_table_quadratic(const Matrix& H);

/// Sampled estimate: safety times the largest observed difference quotient of
/// phi'_{ij,x}(s) over random x in [box_lower, box_upper] and s, t in [-1, 1].
LipschitzTable lipschitz_table_sampled(const Objective& f, const Vector& box_lower,
                                       const Vector& box_upper, int samples, double safety,
                                       std::uint64_t seed);

/// Same table with every L_ij (and hence L_j, Lbar) multiplied by factor. Used
/// for negative controls.
LipschitzTable scaled_table(const LipschitzTable& table, double factor);

struct RateConstants {
  double R0 = 0.0;
  double Gstar = 0.0;
  double T = 0.0;
  double fdec = 0.0;
  double C = 0.0;
  double mu = 0.0;
  bool R0_estimated = false;
};

struct RateOptions {
  /// Level-set samples used for R0 when mu is not positive.
  int level_set_samples = 0;
  std::uint64_t seed = 0;
};

/// Constants of the sublinear rate f(x^k) - f* <= C / k:
///   T    = max{1/A_l, Lmax / (2 delta (1 - gamma))}
///   R0   = sqrt(2 (f(x0) - f*) / mu)   (or a sampled lower estimate if mu <= 0)
///   G*   = max_ij [grad_j f(x*) - grad_i f(x*)]
///   fdec = T R0 + 2 Lbar R0 + G*
///   C    = 3 A_u (n - 1) fdec^2 / (2 gamma)
RateConstants rate_constants(const BoxSimplexProblem& p, const LipschitzTable& table,
                             const SolutionCertificate& cert, double f_x0,
                             const ArmijoParams& armijo, double mu,
                             const RateOptions& options = {}, const Vector* x0 = nullptr);

/// r_j = tau D*max / (1 + tau)
double radius_j(const SolutionCertificate& cert, double tau);

/// r_A = zeta / (2 L + max{1/A_l, Lmax / (2 (1 - gamma))})
double radius_A(const SolutionCertificate& cert, const LipschitzTable& table,
                const ArmijoParams& armijo);

struct IdentificationRadii {
  double r_j = 0.0;
  double r_A = 0.0;
};

IdentificationRadii identification_radii(const SolutionCertificate& cert,
                                         const LipschitzTable& table, const ArmijoParams& armijo,
                                         double tau);

struct ComplexityBounds {
  double kA_bound = 0.0;
  double kN_bound = 0.0;
};

/// floor((2C/mu) max{r_j^-2, r_A^-2}) + 1 and floor((2C/mu) D*min^-2) + 1.
/// Stored as doubles: the bounds routinely exceed 64-bit integers.
ComplexityBounds complexity_bounds(const RateConstants& rc, const IdentificationRadii& radii,
                                   double dmin_star);
double kN_bound_value(const RateConstants& rc, double dmin_star);

struct LemmaReport {
  int trials = 0;
  double tolerance = 1e-9;
  // Largest (lhs - rhs) / (1 + |lhs| + |rhs|) seen for each inequality.
  double worst_lips_const = -kInf;
  double worst_corollary = -kInf;
  double worst_descent = -kInf;
  int violations_lips_const = 0;
  int violations_corollary = 0;
  int violations_descent = 0;

  int violations() const { return violations_lips_const + violations_corollary + violations_descent; }
};

/// Evaluates the seminorm Lipschitz inequalities on random feasible pairs.
/// Violations are counted, not thrown.
LemmaReport lemma_suite(const BoxSimplexProblem& p, const LipschitzTable& table, int trials,
                        std::uint64_t seed);

}  // namespace ac2cd
