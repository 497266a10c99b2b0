#include "ac2cd/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ac2cd {

void ArmijoParams::validate() const {
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0,1)");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1)");
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
  require(A_l > 0.0 && A_l <= A_u && std::isfinite(A_u), "need 0 < A_l <= A_u < inf");
  require(max_backtracks >= 0, "max_backtracks must be non-negative");
}

double max_feasible_stepsize(const BoxSimplexProblem& p, const Vector& z, Index pk, Index j,
                             double g) {
  require(pk != j, "max_feasible_stepsize: pk equals j");
  if (g == 0.0) return 0.0;
  double room = 0.0;
  if (g > 0.0) {
    room = std::min(p.upper(pk) - z[pk], z[j] - p.lower(j));
  } else {
    room = std::min(z[pk] - p.lower(pk), p.upper(j) - z[j]);
  }
  return std::max(0.0, room) / std::abs(g);
}

double interiority_cap(const BoxSimplexProblem& p, const Vector& z, Index j, double g,
                       double epsilon) {
  require(g != 0.0, "interiority_cap: undefined for g = 0");
  require(p.lower(j) < z[j] && z[j] < p.upper(j), "interiority_cap: z_j must be interior");
  const double to_lower = z[j] - p.lower(j);
  const double to_upper = p.upper(j) - z[j];
  const double D = std::min(to_lower, to_upper);
  // g > 0 moves x_j down, g < 0 moves it up.
  if (g > 0.0) {
    if (D == to_lower) return (1.0 - epsilon) * D / g;
    return (to_lower - epsilon * D) / g;
  }
  if (D == to_upper) return (1.0 - epsilon) * D / std::abs(g);
  return (to_upper - epsilon * D) / std::abs(g);
}

double choose_A(const BoxSimplexProblem& p, const Vector& z, Index /*pk*/, Index j, double g,
                const ArmijoParams& params) {
  if (params.strategy == StepStrategy::FixedClamp || g == 0.0) return params.A_u;
  return std::min(interiority_cap(p, z, j, g, params.epsilon), params.A_u);
}

StepRecord armijo(const BoxSimplexProblem& p, const Vector& z, const Vector& d, double Delta,
                  double dir_deriv, const ArmijoParams& params) {
  StepRecord rec;
  rec.Delta = Delta;
  if (Delta == 0.0) return rec;

  const Objective& f = p.objective();
  double alpha = Delta;
  int m = 0;
  while (f.value_change(z, d, alpha) > params.gamma * alpha * dir_deriv) {
    if (m == params.max_backtracks) {
      std::ostringstream os;
      os << "Armijo search failed after " << m << " backtracks (Delta=" << Delta
         << ", dir_deriv=" << dir_deriv << ")";
      throw LineSearchError(os.str());
    }
    alpha *= params.delta;
    ++m;
  }
  rec.alpha = alpha;
  rec.backtracks = m;
  return rec;
}

}  // namespace ac2cd
