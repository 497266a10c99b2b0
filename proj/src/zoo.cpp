#include "ac2cd/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "ac2cd/reference.hpp"

namespace ac2cd {

namespace {

Matrix random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix G(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) G(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(n, n);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Vector default_start(const BoxSimplexProblem& p) {
  Vector c(p.n());
  for (Index i = 0; i < p.n(); ++i) {
    const bool lo = std::isfinite(p.lower(i));
    const bool hi = std::isfinite(p.upper(i));
    if (lo && hi) c[i] = 0.5 * (p.lower(i) + p.upper(i));
    else if (lo) c[i] = p.lower(i) + 1.0;
    else if (hi) c[i] = p.upper(i) - 1.0;
    else c[i] = 0.0;
  }
  return project_onto_feasible(p, c);
}

Instance gen_quadratic_designed(const DesignSpec& spec) {
  const Index n = spec.n;
  require(n >= 2, "gen_quadratic_designed: n must be at least 2");
  require(spec.mu > 0.0 && spec.Lcap >= spec.mu, "gen_quadratic_designed: need 0 < mu <= Lcap");
  require(static_cast<Index>(spec.pattern.size()) == n, "gen_quadratic_designed: pattern size");
  require(static_cast<Index>(spec.margins.size()) == n, "gen_quadratic_designed: margins size");
  const bool any_interior = std::any_of(spec.pattern.begin(), spec.pattern.end(),
                                        [](BoundTag t) { return t == BoundTag::Interior; });
  require(any_interior, "gen_quadratic_designed: pattern leaves no interior coordinate");
  for (double m : spec.margins) require(m >= 0.0, "gen_quadratic_designed: negative margin");

  std::mt19937_64 rng(spec.seed);
  const Matrix U = random_orthogonal(n, rng);
  Vector s(n);
  for (Index i = 0; i < n; ++i) s[i] = uniform(rng, spec.mu, spec.Lcap);
  s[0] = spec.mu;
  s[n - 1] = spec.Lcap;
  Matrix H = U * s.asDiagonal() * U.transpose();
  H = 0.5 * (H + H.transpose());

  Vector l(n), u(n), x(n), g(n);
  const double lambda = uniform(rng, -1.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> three(0, 2);
  for (Index i = 0; i < n; ++i) {
    const double width = uniform(rng, 1.0, 3.0);
    const double margin = spec.margins[static_cast<std::size_t>(i)];
    switch (spec.pattern[static_cast<std::size_t>(i)]) {
      case BoundTag::AtLower:
        l[i] = uniform(rng, -1.0, 1.0);
        u[i] = coin(rng) ? l[i] + width : kInf;
        x[i] = l[i];
        g[i] = lambda + margin;
        break;
      case BoundTag::AtUpper:
        u[i] = uniform(rng, -1.0, 1.0);
        l[i] = coin(rng) ? u[i] - width : -kInf;
        x[i] = u[i];
        g[i] = lambda - margin;
        break;
      case BoundTag::Interior: {
        const int kind = three(rng);
        const double anchor = uniform(rng, -1.0, 1.0);
        if (kind == 0) {
          l[i] = anchor;
          u[i] = anchor + width;
          x[i] = l[i] + width * uniform(rng, 0.2, 0.8);
        } else if (kind == 1) {
          l[i] = anchor;
          u[i] = kInf;
          x[i] = l[i] + uniform(rng, 0.3, 1.5);
        } else {
          l[i] = -kInf;
          u[i] = anchor;
          x[i] = u[i] - uniform(rng, 0.3, 1.5);
        }
        g[i] = lambda;
        break;
      }
    }
  }
  const Vector q = g - H * x;
  auto f = std::make_shared<QuadraticObjective>(H, q);
  BoxSimplexProblem p(l, u, x.sum(), f);
  SolutionCertificate cert = make_certificate(p, x, lambda);

  Instance inst{"designed-n" + std::to_string(n) + "-s" + std::to_string(spec.seed), p,
                std::nullopt, spec.mu, std::move(cert)};
  inst.x0 = default_start(inst.problem);
  return inst;
}

Instance gen_simplex_projection(const Vector& c) {
  const Index n = c.size();
  require(n >= 2, "gen_simplex_projection: n must be at least 2");
  auto f = std::make_shared<QuadraticObjective>(Matrix::Identity(n, n), -c, 0.5 * c.squaredNorm());
  BoxSimplexProblem p(Vector::Zero(n), Vector::Constant(n, kInf), 1.0, f);
  const Vector xs = simplex_projection(c);
  Index top = 0;
  xs.maxCoeff(&top);
  const double lambda = xs[top] - c[top];
  Instance inst{"simplex-n" + std::to_string(n), p, std::nullopt, 1.0,
                make_certificate(p, xs, lambda)};
  inst.x0 = default_start(inst.problem);
  return inst;
}

Instance gen_e1() {
  Instance inst = gen_simplex_projection((Vector(3) << 0.5, 0.7, -0.2).finished());
  inst.name = "E1";
  inst.x0 = (Vector(3) << 1.0, 0.0, 0.0).finished();
  return inst;
}

Instance gen_svm_like(Index m, Index n, std::uint64_t seed, double Cbox) {
  require(m >= 1 && n >= 2, "gen_svm_like: need m >= 1 and n >= 2");
  require(Cbox > 0.0, "gen_svm_like: box size must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix Q(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) Q(i, j) = normal(rng) / std::sqrt(static_cast<double>(m));
  }
  Vector labels(n);
  std::uniform_int_distribution<int> coin(0, 1);
  for (Index j = 0; j < n; ++j) labels[j] = coin(rng) ? 1.0 : -1.0;
  // Both classes must be present, otherwise e^T x = 0 pins x to 0.
  labels[0] = 1.0;
  labels[n - 1] = -1.0;

  Vector l(n), u(n);
  for (Index j = 0; j < n; ++j) {
    l[j] = labels[j] > 0 ? 0.0 : -Cbox;
    u[j] = labels[j] > 0 ? Cbox : 0.0;
  }
  auto f = std::make_shared<FactoredObjective>(Q, labels);
  double mu = 0.0;
  if (m >= n) {
    mu = Eigen::SelfAdjointEigenSolver<Matrix>(*f->hessian()).eigenvalues()[0];
    if (mu < 1e-12) mu = 0.0;
  }
  BoxSimplexProblem p(l, u, 0.0, f);
  Instance inst{"svm-m" + std::to_string(m) + "-n" + std::to_string(n) + "-s" + std::to_string(seed),
                p, std::nullopt, mu, std::nullopt};
  inst.x0 = default_start(inst.problem);
  if (mu > 0.0 && n <= kMaxEnumerationDim) inst.certificate = solve_qp_enumerate(inst.problem);
  return inst;
}

LevelSetCornerReport check_level_set_corners(const BoxSimplexProblem& p, const Vector& x0, int samples,
                                    std::uint64_t seed) {
  const Index n = p.n();
  const double f0 = p.value(x0);
  const double level_tol = 1e-12 * (1.0 + std::abs(f0));
  const double sum_tol = 1e-12 * std::max(1.0, std::abs(p.b()));
  LevelSetCornerReport report;

  if (n <= 16) {
    report.exhaustive = true;
    for (Index i = 0; i < n; ++i) {
      // A free coordinate can never sit at a bound, so no corner exists.
      if (!std::isfinite(p.lower(i)) && !std::isfinite(p.upper(i))) return report;
    }
    Vector x(n);
    for (long mask = 0; mask < (1L << n); ++mask) {
      bool valid = true;
      for (Index i = 0; i < n && valid; ++i) {
        const double v = (mask >> i) & 1L ? p.upper(i) : p.lower(i);
        valid = std::isfinite(v);
        x[i] = v;
      }
      if (!valid) continue;
      ++report.points_checked;
      if (std::abs(x.sum() - p.b()) > sum_tol) continue;
      if (p.value(x) <= f0 + level_tol) {
        report.holds = false;
        report.witness = x;
        return report;
      }
    }
    return report;
  }

  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Vector x = sample_feasible_point(p, rng);
    ++report.points_checked;
    if (p.value(x) > f0 + level_tol) continue;
    bool all_bound = true;
    for (Index i = 0; i < n && all_bound; ++i) {
      all_bound = x[i] == p.lower(i) || x[i] == p.upper(i);
    }
    if (all_bound) {
      report.holds = false;
      report.witness = x;
      return report;
    }
  }
  return report;
}

Instance gen_random_designed(Index n, std::uint64_t seed) {
  require(n >= 2, "gen_random_designed: n must be at least 2");
  std::mt19937_64 rng(seed);
  DesignSpec spec;
  spec.n = n;
  spec.seed = rng();
  spec.mu = uniform(rng, 0.5, 1.0);
  spec.Lcap = uniform(rng, 2.0, 10.0);
  spec.pattern.assign(static_cast<std::size_t>(n), BoundTag::Interior);
  spec.margins.assign(static_cast<std::size_t>(n), 0.0);
  std::uniform_int_distribution<int> role(0, 2);
  for (auto& t : spec.pattern) t = static_cast<BoundTag>(role(rng));
  // Force at least one active and one interior coordinate.
  std::uniform_int_distribution<Index> pick(0, n - 1);
  const Index a = pick(rng);
  Index b = pick(rng);
  while (b == a) b = pick(rng);
  if (spec.pattern[static_cast<std::size_t>(a)] == BoundTag::Interior) {
    spec.pattern[static_cast<std::size_t>(a)] = BoundTag::AtLower;
  }
  spec.pattern[static_cast<std::size_t>(b)] = BoundTag::Interior;
  for (auto& m : spec.margins) m = uniform(rng, 0.1, 1.0);
  return gen_quadratic_designed(spec);
}

std::vector<Instance> acceptance_family(int count, std::uint64_t seed) {
  require(count >= 0, "acceptance_family: negative count");
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Instance inst = gen_random_designed(3 + k % 8, rng());
    inst.name = "family-" + std::to_string(k);
    out.push_back(std::move(inst));
  }
  return out;
}

Instance gen_interior_optimum(Index n, std::uint64_t seed) {
  DesignSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.pattern.assign(static_cast<std::size_t>(n), BoundTag::Interior);
  spec.margins.assign(static_cast<std::size_t>(n), 0.0);
  Instance inst = gen_quadratic_designed(spec);
  inst.name = "interior-n" + std::to_string(n);
  return inst;
}

Instance gen_degenerate(Index n, std::uint64_t seed) {
  require(n >= 3, "gen_degenerate: n must be at least 3");
  DesignSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.pattern.assign(static_cast<std::size_t>(n), BoundTag::Interior);
  spec.margins.assign(static_cast<std::size_t>(n), 0.0);
  spec.pattern[0] = BoundTag::AtLower;
  spec.margins[0] = 0.3;
  spec.pattern[1] = BoundTag::AtUpper;  // margin stays 0
  Instance inst = gen_quadratic_designed(spec);
  inst.name = "degenerate-n" + std::to_string(n);
  return inst;
}

}  // namespace ac2cd
