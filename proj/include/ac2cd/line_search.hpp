#pragma once

#include "ac2cd/problem.hpp"

namespace ac2cd {

/// How the cap A^{k,i} on the initial Armijo trial is chosen.
enum class StepStrategy {
  FixedClamp,             // A = A_u
  InteriorityPreserving,  // A = min{alpha_hat, A_u}; keeps x_j away from its bounds
};

struct ArmijoParams {
  double gamma = 0.1;    // sufficient decrease
  double delta = 0.5;    // backtracking factor
  double A_l = 1e-8;     // lower bound on A, used by the theory constants only
  double A_u = 1.0;
  double epsilon = 0.5;  // interiority fraction
  StepStrategy strategy = StepStrategy::InteriorityPreserving;
  int max_backtracks = 60;

  void validate() const;
};

struct StepRecord {
  Index p = -1;
  double g = 0.0;
  double alpha_bar = 0.0;  // may be +inf
  double A = 0.0;
  double Delta = 0.0;
  double alpha = 0.0;
  int backtracks = 0;
  bool hit_boundary = false;
};

/// Largest alpha keeping z + alpha g (e_pk - e_j) inside the box; 0 when g = 0.
double max_feasible_stepsize(const BoxSimplexProblem& p, const Vector& z, Index pk, Index j,
                             double g);

/// Stepsize at which D_j(z + alpha d) drops to epsilon * D_j(z).
/// Requires g != 0 and z_j strictly inside its bounds.
double interiority_cap(const BoxSimplexProblem& p, const Vector& z, Index j, double g,
                       double epsilon);

double choose_A(const BoxSimplexProblem& p, const Vector& z, Index pk, Index j, double g,
                const ArmijoParams& params);

/// Backtracking from alpha = Delta until
///   f(z + alpha d) <= f(z) + gamma * alpha * dir_deriv.
/// Fills Delta, alpha and backtracks of the returned record.
StepRecord armijo(const BoxSimplexProblem& p, const Vector& z, const Vector& d, double Delta,
                  double dir_deriv, const ArmijoParams& params);

}  // namespace ac2cd
