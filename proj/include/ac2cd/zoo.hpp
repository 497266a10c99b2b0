#pragma once

#include <cstdint>
#include <vector>

#include "ac2cd/problem.hpp"

namespace ac2cd {

/// Inverse-design recipe for a strongly convex quadratic with a known
/// minimizer. pattern[i] says where x*_i sits; margins[i] is the gap
/// |grad_i f(x*) - lambda*| for active coordinates (0 makes i degenerate).
struct DesignSpec {
  Index n = 3;
  std::uint64_t seed = 0;
  double mu = 1.0;
  double Lcap = 10.0;
  std::vector<BoundTag> pattern;
  std::vector<double> margins;
};

/// H = U diag(s) U^T with s in [mu, Lcap] (both ends attained), x* placed per
/// pattern, lambda* drawn from [-1, 1] and q = g_target - H x*. Every
/// coordinate gets at least one finite bound. The returned instance carries
/// mu, a default x0 and the designed certificate.
Instance gen_quadratic_designed(const DesignSpec& spec);

/// f(x) = 1/2 ||x - c||^2 on the unit simplex (u = +inf).
Instance gen_simplex_projection(const Vector& c);

/// The n = 3 worked instance: c = (0.5, 0.7, -0.2), x0 = (1, 0, 0).
Instance gen_e1();

/// f(x) = x^T Q^T Q x - q^T x with random features Q (m x n), labels folded
/// into the variables: x_i in [0, C] for label +1 and [-C, 0] for label -1,
/// e^T x = 0 and q = labels. mu = 0 when m < n.
Instance gen_svm_like(Index m, Index n, std::uint64_t seed, double Cbox = 1.0);

/// Center of the finite bounds (one unit inside a one-sided bound, 0 when
/// free) projected onto the feasible set.
Vector default_start(const BoxSimplexProblem& p);

struct LevelSetCornerReport {
  bool holds = true;
  bool exhaustive = false;  // corners enumerated exactly rather than sampled
  long points_checked = 0;
  Vector witness;           // a level-set point with every coordinate at a bound
};

/// Looks for feasible points with every coordinate at a bound and
/// f(x) <= f(x0). Exact corner enumeration up to n = 16, sampling beyond.
LevelSetCornerReport check_level_set_corners(const BoxSimplexProblem& p, const Vector& x0,
                                    int samples = 2000, std::uint64_t seed = 0);

/// Random non-degenerate design: at least one interior and one active
/// coordinate, margins in [0.1, 1], mu in [0.5, 1], Lcap in [2, 10].
Instance gen_random_designed(Index n, std::uint64_t seed);

/// Seeded family of non-degenerate designed instances with n in 3..10, at
/// least one interior and one active coordinate each.
std::vector<Instance> acceptance_family(int count = 50, std::uint64_t seed = 2024);

/// Designed instance whose minimizer is interior (A* empty).
Instance gen_interior_optimum(Index n, std::uint64_t seed);

/// Designed instance with one active coordinate of zero margin.
Instance gen_degenerate(Index n, std::uint64_t seed);

}  // namespace ac2cd
