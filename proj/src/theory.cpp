#include "ac2cd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ac2cd/seminorm.hpp"

namespace ac2cd {

LipschitzTable finalize_table(Matrix Lij, double L, bool estimate) {
  require(Lij.rows() == Lij.cols(), "Lipschitz table must be square");
  const Index n = Lij.rows();
  double biggest = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) biggest = std::max(biggest, Lij(i, j));
    }
  }
  // Any positive overestimate of a zero constant keeps the inequalities valid.
  const double floor = 1e-12 * (biggest > 0.0 ? biggest : 1.0);

  LipschitzTable t;
  t.L = L;
  t.estimate = estimate;
  t.Lij = std::move(Lij);
  for (Index i = 0; i < n; ++i) {
    t.Lij(i, i) = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (i != j && t.Lij(i, j) <= 0.0) t.Lij(i, j) = floor;
    }
  }
  t.Lmax = t.Lij.maxCoeff();
  t.Lj = t.Lij.colwise().sum().transpose();
  t.Lbar = t.Lj.maxCoeff();
  return t;
}

double spectral_radius(const Matrix& H, double rel_tol, int max_iter) {
  require(H.rows() == H.cols(), "spectral_radius: matrix must be square");
  const Index n = H.rows();
  if (H.isZero(0.0)) return 0.0;
  // Deterministic start with components in every eigendirection generically.
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i + 1));
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    // Iterating with H^2 separates +rho from -rho.
    Vector w = H * (H * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    w /= norm;
    const bool done = std::abs(next - estimate) <= rel_tol * next;
    estimate = next;
    v = std::move(w);
    if (done) break;
  }
  return estimate;
}

LipschitzTable lipschitz_table_quadratic(const Matrix& H) {
  require(H.rows() == H.cols(), "Hessian must be square");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (!H.isApprox(H.transpose(), 1e-12) && (H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ContractError("lipschitz_table_quadratic: Hessian is not symmetric");
  }
  const Index n = H.rows();
  Matrix Lij = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j) Lij(i, j) = std::abs(H(i, i) + H(j, j) - 2.0 * H(i, j));
    }
  }
  return finalize_table(std::move(Lij), spectral_radius(H), false);
}

LipschitzTable lipschitz_table_sampled(const Objective& f, const Vector& box_lower,
                                       const Vector& box_upper, int samples, double safety,
                                       std::uint64_t seed) {
  require(samples >= 2, "lipschitz_table_sampled: need at least two samples");
  require(safety > 0.0, "lipschitz_table_sampled: safety must be positive");
  const Index n = f.dimension();
  require(box_lower.size() == n && box_upper.size() == n, "sampling box has wrong dimension");
  require(box_lower.allFinite() && box_upper.allFinite(), "sampling box must be finite");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);
  auto random_point = [&] {
    Vector x(n);
    for (Index i = 0; i < n; ++i) x[i] = box_lower[i] + unit(rng) * (box_upper[i] - box_lower[i]);
    return x;
  };

  Matrix Lij = Matrix::Zero(n, n);
  double L = 0.0;
  for (int sample = 0; sample < samples; ++sample) {
    const Vector x = random_point();
    const Vector y = random_point();
    const double dist = (x - y).norm();
    if (dist > 0.0) L = std::max(L, (f.gradient(x) - f.gradient(y)).norm() / dist);

    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double s = offset(rng);
        const double t = offset(rng);
        if (s == t) continue;
        Vector xs = x;
        xs[i] += s;
        xs[j] -= s;
        Vector xt = x;
        xt[i] += t;
        xt[j] -= t;
        const double ds = f.partial(xs, i) - f.partial(xs, j);
        const double dt = f.partial(xt, i) - f.partial(xt, j);
        const double q = std::abs(ds - dt) / std::abs(s - t);
        Lij(i, j) = std::max(Lij(i, j), q);
        Lij(j, i) = Lij(i, j);
      }
    }
  }
  return finalize_table(safety * Lij, safety * L, true);
}

LipschitzTable scaled_table(const LipschitzTable& table, double factor) {
  require(factor > 0.0, "scaled_table: factor must be positive");
  LipschitzTable t = finalize_table(factor * table.Lij, table.L, table.estimate);
  return t;
}

RateConstants rate_constants(const BoxSimplexProblem& p, const LipschitzTable& table,
                             const SolutionCertificate& cert, double f_x0,
                             const ArmijoParams& armijo, double mu, const RateOptions& options,
                             const Vector* x0) {
  armijo.validate();
  RateConstants rc;
  rc.mu = std::max(mu, 0.0);

  if (mu > 0.0) {
    rc.R0 = std::sqrt(2.0 * std::max(0.0, f_x0 - cert.f_star) / mu);
  } else {
    if (options.level_set_samples <= 0) {
      throw ContractError("rate_constants: mu <= 0 and no level-set samples requested");
    }
    // Lower estimate of the max over the level set of max_j ||x - x*||_(j).
    auto spread = [&](const Vector& x) {
      double best = 0.0;
      for (Index j = 0; j < p.n(); ++j) best = std::max(best, seminorm_j(x - cert.x_star, j));
      return best;
    };
    std::mt19937_64 rng(options.seed);
    if (x0 != nullptr) rc.R0 = spread(*x0);
    for (int s = 0; s < options.level_set_samples; ++s) {
      const Vector x = sample_feasible_point(p, rng);
      if (p.value(x) <= f_x0) rc.R0 = std::max(rc.R0, spread(x));
    }
    rc.R0_estimated = true;
  }

  const Vector grad = p.gradient(cert.x_star);
  rc.Gstar = grad.maxCoeff() - grad.minCoeff();

  rc.T = std::max(1.0 / armijo.A_l, table.Lmax / (2.0 * armijo.delta * (1.0 - armijo.gamma)));
  rc.fdec = rc.T * rc.R0 + 2.0 * table.Lbar * rc.R0 + rc.Gstar;
  rc.C = 3.0 * armijo.A_u * static_cast<double>(p.n() - 1) * rc.fdec * rc.fdec /
         (2.0 * armijo.gamma);
  return rc;
}

double radius_j(const SolutionCertificate& cert, double tau) {
  require(tau > 0.0 && tau <= 1.0, "tau must lie in (0,1]");
  return tau * cert.dmax_star / (1.0 + tau);
}

double radius_A(const SolutionCertificate& cert, const LipschitzTable& table,
                const ArmijoParams& armijo) {
  if (cert.strict_active.empty() || !cert.zeta) {
    throw UndefinedQuantity("r_A undefined: no strictly active index");
  }
  const double floor_inv = std::max(1.0 / armijo.A_l, table.Lmax / (2.0 * (1.0 - armijo.gamma)));
  return *cert.zeta / (2.0 * table.L + floor_inv);
}

IdentificationRadii identification_radii(const SolutionCertificate& cert,
                                         const LipschitzTable& table, const ArmijoParams& armijo,
                                         double tau) {
  return {radius_j(cert, tau), radius_A(cert, table, armijo)};
}

namespace {

void require_strong_convexity(const RateConstants& rc) {
  if (!(rc.mu > 0.0)) throw ContractError("bounds require strong convexity (mu > 0)");
}

}  // namespace

double kN_bound_value(const RateConstants& rc, double dmin_star) {
  require_strong_convexity(rc);
  require(dmin_star > 0.0, "kN bound needs D*min > 0");
  return std::floor(2.0 * rc.C / rc.mu / (dmin_star * dmin_star)) + 1.0;
}

ComplexityBounds complexity_bounds(const RateConstants& rc, const IdentificationRadii& radii,
                                   double dmin_star) {
  require_strong_convexity(rc);
  require(radii.r_j > 0.0 && radii.r_A > 0.0, "complexity bounds need positive radii");
  const double worst = std::max(1.0 / (radii.r_j * radii.r_j), 1.0 / (radii.r_A * radii.r_A));
  ComplexityBounds out;
  out.kA_bound = std::floor(2.0 * rc.C / rc.mu * worst) + 1.0;
  out.kN_bound = kN_bound_value(rc, dmin_star);
  return out;
}

LemmaReport lemma_suite(const BoxSimplexProblem& p, const LipschitzTable& table, int trials,
                        std::uint64_t seed) {
  require(table.Lij.rows() == p.n(), "Lipschitz table has wrong dimension");
  LemmaReport report;
  report.trials = trials;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> pick(0, p.n() - 1);
  const Vector e = Vector::Ones(p.n());

  auto record = [&](double lhs, double rhs, double& worst, int& violations) {
    const double slack = (lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs));
    worst = std::max(worst, slack);
    if (slack > report.tolerance) ++violations;
  };

  for (int t = 0; t < trials; ++t) {
    const Index j = pick(rng);
    const double Lj = table.Lj[j];
    const Vector x1 = sample_feasible_point(p, rng);
    const Vector x2 = sample_feasible_point(p, rng);
    const Vector g1 = p.gradient(x1);
    const Vector g2 = p.gradient(x2);
    const double dist = seminorm_j(x1 - x2, j);

    // ||[grad f(x') - grad_j f(x') e] - [grad f(x'') - grad_j f(x'') e]||_(j) <= L_j ||x' - x''||_(j)
    const Vector reduced = (g1 - g1[j] * e) - (g2 - g2[j] * e);
    record(seminorm_j(reduced, j), Lj * dist, report.worst_lips_const,
           report.violations_lips_const);

    // f(x'') <= f(x') + grad f(x')^T (x'' - x') + L_j / 2 ||x' - x''||_(j)^2
    record(p.value(x2), p.value(x1) + g1.dot(x2 - x1) + 0.5 * Lj * dist * dist,
           report.worst_descent, report.violations_descent);

    // |grad_p f(v) - grad_j f(v) + g| <= L_j ||v - z||_(j) with g taken at z.
    Index pk = pick(rng);
    while (pk == j) pk = pick(rng);
    const Vector& z = x1;
    const Vector& v = x2;
    const double g = g1[j] - g1[pk];
    record(std::abs(g2[pk] - g2[j] + g), Lj * seminorm_j(v - z, j), report.worst_corollary,
           report.violations_corollary);
  }
  return report;
}

}  // namespace ac2cd
