#include "ac2cd/reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace ac2cd {

namespace {

enum class Role { Interior, AtLower, AtUpper };

struct PatternSolution {
  Vector x;
  double lambda = 0.0;
  double rcond = 0.0;
};

double bound_scale(double v) { return std::max(1.0, std::isfinite(v) ? std::abs(v) : 0.0); }

// Solves the stationarity system of one role pattern and checks it.
std::optional<PatternSolution> try_pattern(const BoxSimplexProblem& p, const Matrix& H,
                                           const Vector& q, const std::vector<Role>& roles,
                                           double tol) {
  const Index n = p.n();
  Vector x = Vector::Zero(n);
  std::vector<Index> interior;
  double fixed_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    switch (roles[static_cast<std::size_t>(i)]) {
      case Role::AtLower: x[i] = p.lower(i); fixed_sum += x[i]; break;
      case Role::AtUpper: x[i] = p.upper(i); fixed_sum += x[i]; break;
      case Role::Interior: interior.push_back(i); break;
    }
  }
  const double scale = std::max(1.0, std::abs(p.b()));
  PatternSolution sol;
  sol.rcond = 1.0;
  double lambda = 0.0;

  if (interior.empty()) {
    if (std::abs(fixed_sum - p.b()) > tol * scale) return std::nullopt;
    // lambda only has to sit between the gradients of the two bound groups.
    const Vector g = H * x + q;
    double lo = -kInf;
    double hi = kInf;
    for (Index i = 0; i < n; ++i) {
      if (roles[static_cast<std::size_t>(i)] == Role::AtLower) hi = std::min(hi, g[i]);
      else lo = std::max(lo, g[i]);
    }
    if (lo > hi + tol * std::max({1.0, std::abs(lo), std::abs(hi)})) return std::nullopt;
    if (std::isfinite(lo) && std::isfinite(hi)) lambda = 0.5 * (lo + hi);
    else lambda = std::isfinite(lo) ? lo : hi;
  } else {
    const Index m = static_cast<Index>(interior.size());
    Matrix HII(m, m);
    Vector r(m);
    for (Index a = 0; a < m; ++a) {
      const Index i = interior[static_cast<std::size_t>(a)];
      double acc = q[i];
      for (Index k = 0; k < n; ++k) {
        if (roles[static_cast<std::size_t>(k)] != Role::Interior) acc += H(i, k) * x[k];
      }
      r[a] = acc;
      for (Index c = 0; c < m; ++c) HII(a, c) = H(i, interior[static_cast<std::size_t>(c)]);
    }
    Eigen::LLT<Matrix> llt(HII);
    if (llt.info() != Eigen::Success) return std::nullopt;
    sol.rcond = llt.rcond();
    // x_I = y + lambda w with H_II y = -r, H_II w = e; lambda from e^T x_I = b - fixed.
    const Vector y = llt.solve(-r);
    const Vector w = llt.solve(Vector::Ones(m));
    lambda = (p.b() - fixed_sum - y.sum()) / w.sum();
    for (Index a = 0; a < m; ++a) x[interior[static_cast<std::size_t>(a)]] = y[a] + lambda * w[a];
  }

  // Primal bounds first, they are cheap.
  for (Index i : interior) {
    if (x[i] < p.lower(i) - tol * bound_scale(p.lower(i))) return std::nullopt;
    if (x[i] > p.upper(i) + tol * bound_scale(p.upper(i))) return std::nullopt;
  }
  const Vector g = H * x + q;
  const double gscale = std::max(1.0, std::abs(lambda));
  for (Index i = 0; i < n; ++i) {
    const Role role = roles[static_cast<std::size_t>(i)];
    if (role == Role::AtLower && g[i] - lambda < -tol * gscale) return std::nullopt;
    if (role == Role::AtUpper && g[i] - lambda > tol * gscale) return std::nullopt;
  }
  // Snap interior values that landed on a bound within rounding.
  for (Index i : interior) {
    if (std::abs(x[i] - p.lower(i)) <= tol * bound_scale(p.lower(i))) x[i] = p.lower(i);
    if (std::abs(x[i] - p.upper(i)) <= tol * bound_scale(p.upper(i))) x[i] = p.upper(i);
  }
  sol.x = std::move(x);
  sol.lambda = lambda;
  return sol;
}

std::vector<Role> roles_of(const BoxSimplexProblem& p, const Vector& x) {
  std::vector<Role> roles(static_cast<std::size_t>(p.n()), Role::Interior);
  for (Index i = 0; i < p.n(); ++i) {
    if (at_lower(p, x, i, 1e-7)) roles[static_cast<std::size_t>(i)] = Role::AtLower;
    else if (at_upper(p, x, i, 1e-7)) roles[static_cast<std::size_t>(i)] = Role::AtUpper;
  }
  return roles;
}

}  // namespace

SolutionCertificate solve_qp_enumerate(const BoxSimplexProblem& p) {
  const Matrix* Hp = p.objective().hessian();
  require(Hp != nullptr, "solve_qp_enumerate: objective is not quadratic");
  require(p.n() <= kMaxEnumerationDim, "solve_qp_enumerate: n exceeds 14");
  const Matrix& H = *Hp;
  const Index n = p.n();
  Eigen::LLT<Matrix> full(H);
  if (full.info() != Eigen::Success || Eigen::SelfAdjointEigenSolver<Matrix>(H).eigenvalues()[0] <= 0.0) {
    throw ContractError("solve_qp_enumerate: Hessian is not positive definite");
  }
  const Vector q = p.gradient(Vector::Zero(n));
  const double tol = 1e-10;

  auto finish = [&](const PatternSolution& sol) {
    SolutionCertificate cert = make_certificate(p, sol.x, sol.lambda);
    cert.condition_estimate = sol.rcond > 0.0 ? 1.0 / sol.rcond : kInf;
    return cert;
  };

  // Cheap guess first: the pattern of an approximate minimizer usually verifies.
  try {
    const Vector start = project_onto_feasible(p, Vector::Zero(n));
    const Vector guess = projected_gradient_reference(p, start, 1e-9, 20000);
    if (auto sol = try_pattern(p, H, q, roles_of(p, guess), tol)) return finish(*sol);
  } catch (const NumericalError&) {
  }

  // Exhaustive enumeration in lexicographic pattern order; the first verified
  // pattern wins, which keeps the result deterministic.
  std::vector<Role> roles(static_cast<std::size_t>(n), Role::Interior);
  std::optional<PatternSolution> found;
  std::function<void(Index, double, bool)> recurse = [&](Index i, double fixed_sum,
                                                         bool any_interior) {
    if (found) return;
    if (i == n) {
      if (!any_interior && std::abs(fixed_sum - p.b()) > tol * std::max(1.0, std::abs(p.b()))) {
        return;
      }
      found = try_pattern(p, H, q, roles, tol);
      return;
    }
    const auto slot = static_cast<std::size_t>(i);
    roles[slot] = Role::Interior;
    recurse(i + 1, fixed_sum, true);
    if (std::isfinite(p.lower(i))) {
      roles[slot] = Role::AtLower;
      recurse(i + 1, fixed_sum + p.lower(i), any_interior);
    }
    if (std::isfinite(p.upper(i))) {
      roles[slot] = Role::AtUpper;
      recurse(i + 1, fixed_sum + p.upper(i), any_interior);
    }
    roles[slot] = Role::Interior;
  };
  recurse(0, 0.0, false);
  if (!found) throw NumericalError("solve_qp_enumerate: no role pattern verifies");
  return finish(*found);
}

Vector simplex_projection(const Vector& c) {
  const Index n = c.size();
  require(n >= 1, "simplex_projection: empty vector");
  std::vector<double> s(c.data(), c.data() + n);
  std::sort(s.begin(), s.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumsum += s[static_cast<std::size_t>(k)];
    const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (s[static_cast<std::size_t>(k)] - t > 0.0) theta = t;
  }
  return (c.array() - theta).max(0.0).matrix();
}

Vector projected_gradient_reference(const BoxSimplexProblem& p, const Vector& x0, double tol,
                                    long max_iter) {
  require(x0.size() == p.n(), "projected_gradient_reference: wrong dimension");
  require(tol > 0.0, "projected_gradient_reference: tol must be positive");
  Vector x = is_feasible(p, x0, 1e-12) ? x0 : project_onto_feasible(p, x0);
  double t = 1.0;
  for (long it = 0; it < max_iter; ++it) {
    if (kkt_certificate(p, x).residual <= tol) return x;
    const Vector g = p.gradient(x);
    t *= 2.0;
    for (int bt = 0; bt < 200; ++bt) {
      const Vector xn = project_onto_feasible(p, x - t * g);
      const Vector d = xn - x;
      const double model = g.dot(d) + d.squaredNorm() / (2.0 * t);
      if (p.objective().value_change(x, d, 1.0) <= model + 1e-15 * (1.0 + std::abs(p.value(x)))) {
        x = xn;
        break;
      }
      t *= 0.5;
    }
  }
  if (kkt_certificate(p, x).residual <= tol) return x;
  throw NumericalError("projected_gradient_reference: iteration cap reached without certificate");
}

}  // namespace ac2cd
