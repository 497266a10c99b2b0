#pragma once

#include "ac2cd/problem.hpp"

namespace ac2cd {

inline constexpr Index kMaxEnumerationDim = 14;

/// Exact minimizer of a strongly convex quadratic over the feasible set by
/// enumerating the role (at lower / at upper / interior) of every coordinate.
/// Throws ContractError if the objective has no Hessian, H is not positive
/// definite or n > 14, and NumericalError if no pattern verifies.
SolutionCertificate solve_qp_enumerate(const BoxSimplexProblem& p);

/// Euclidean projection onto the unit simplex {x >= 0, e^T x = 1}.
Vector simplex_projection(const Vector& c);

/// Projected gradient with backtracking. Returns a point whose KKT residual
/// is at most tol; throws NumericalError when max_iter is exhausted.
Vector projected_gradient_reference(const BoxSimplexProblem& p, const Vector& x0, double tol,
                                    long max_iter = 200000);

}  // namespace ac2cd
