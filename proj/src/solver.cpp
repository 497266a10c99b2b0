#include "ac2cd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ac2cd {

void SolverConfig::validate() const {
  require(tau > 0.0 && tau <= 1.0, "tau must lie in (0,1]");
  require(max_outer >= 0, "max_outer must be non-negative");
  require(kkt_tol >= 0.0, "kkt_tol must be non-negative");
  require(active_tol >= 0.0, "active_tol must be non-negative");
  armijo.validate();
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::IterationCap: return "iteration_cap";
    case SolveStatus::LineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

PermutationSource::PermutationSource(PermutationStrategy strategy, Index n, std::uint64_t seed)
    : strategy_(strategy), rng_(seed), current_(static_cast<std::size_t>(n)) {
  std::iota(current_.begin(), current_.end(), Index{0});
}

const std::vector<Index>& PermutationSource::next() {
  switch (strategy_) {
    case PermutationStrategy::Identity:
      break;
    case PermutationStrategy::FixedShuffle:
      if (first_) std::shuffle(current_.begin(), current_.end(), rng_);
      break;
    case PermutationStrategy::ReshufflePerOuter:
      std::shuffle(current_.begin(), current_.end(), rng_);
      break;
  }
  first_ = false;
  return current_;
}

Index select_j(const BoxSimplexProblem& p, const Vector& x, double tau) {
  require(tau > 0.0 && tau <= 1.0, "tau must lie in (0,1]");
  Index best = 0;
  double best_d = distance_to_bound(p, x, 0);
  for (Index h = 1; h < p.n(); ++h) {
    const double d = distance_to_bound(p, x, h);
    if (d > best_d) {
      best_d = d;
      best = h;
    }
  }
  return best;
}

InnerStep inner_step(const BoxSimplexProblem& p, const Vector& z, Index pk, Index j,
                     const ArmijoParams& armijo_params) {
  InnerStep out{z, {}};
  StepRecord& rec = out.record;
  rec.p = pk;
  if (pk == j) {
    // e_pk - e_j = 0: a structural no-op kept so every cycle has n records.
    rec.A = armijo_params.A_u;
    return out;
  }
  rec.g = p.partial(z, j) - p.partial(z, pk);

  const double g = rec.g;
  rec.alpha_bar = max_feasible_stepsize(p, z, pk, j, g);
  rec.A = choose_A(p, z, pk, j, g, armijo_params);
  const double Delta = std::min(rec.alpha_bar, rec.A);
  if (Delta == 0.0) {
    rec.Delta = 0.0;
    return out;
  }

  Vector d = Vector::Zero(p.n());
  d[pk] = g;
  d[j] = -g;
  const StepRecord search = armijo(p, z, d, Delta, -g * g, armijo_params);
  rec.Delta = search.Delta;
  rec.alpha = search.alpha;
  rec.backtracks = search.backtracks;

  Vector& zn = out.z_next;
  if (rec.alpha == rec.alpha_bar) {
    rec.hit_boundary = true;
    // Slack of the two candidates along the direction; the smaller one binds.
    const double slack_p = g > 0.0 ? p.upper(pk) - z[pk] : z[pk] - p.lower(pk);
    const double slack_j = g > 0.0 ? z[j] - p.lower(j) : p.upper(j) - z[j];
    if (slack_p <= slack_j) {
      const double target = g > 0.0 ? p.upper(pk) : p.lower(pk);
      const double moved = target - z[pk];
      zn[pk] = target;
      zn[j] = z[j] - moved;
    } else {
      const double target = g > 0.0 ? p.lower(j) : p.upper(j);
      const double moved = z[j] - target;
      zn[j] = target;
      zn[pk] = z[pk] + moved;
    }
  } else {
    const double step = rec.alpha * g;
    zn[pk] = z[pk] + step;
    zn[j] = z[j] - step;
  }
  return out;
}

namespace {

std::vector<Index> bound_snapshot(const BoxSimplexProblem& p, const Vector& x) {
  std::vector<Index> s;
  for (Index i = 0; i < p.n(); ++i) {
    if (x[i] == p.lower(i) || x[i] == p.upper(i)) s.push_back(i);
  }
  return s;
}

OuterRecord describe_point(const BoxSimplexProblem& p, const Vector& x, long k,
                           const SolverConfig& config) {
  OuterRecord rec;
  rec.k = k;
  rec.x = x;
  rec.f = p.value(x);
  const KKTCertificate kkt = kkt_certificate(p, x, config.active_tol);
  rec.kkt_residual = kkt.residual;
  rec.lambda = kkt.lambda;
  rec.Dk = max_distance(p, x);
  rec.at_bound = bound_snapshot(p, x);
  return rec;
}

}  // namespace

OuterStep outer_iteration(const BoxSimplexProblem& p, const Vector& x, Index j,
                          const std::vector<Index>& permutation, const SolverConfig& config) {
  require(static_cast<Index>(permutation.size()) == p.n(), "permutation has wrong length");
  OuterStep out;
  OuterRecord& rec = out.record;
  rec.j = j;
  rec.permutation = permutation;
  const bool full = config.trace_level == TraceLevel::Full;
  if (full) {
    rec.steps.reserve(permutation.size());
    rec.inner_points.reserve(permutation.size() + 1);
    rec.inner_points.push_back(x);
  }

  Vector z = x;
  for (Index pk : permutation) {
    InnerStep step = inner_step(p, z, pk, j, config.armijo);
    const StepRecord& s = step.record;
    if (s.Delta > 0.0) rec.min_alpha = std::min(rec.min_alpha, s.alpha);
    if (s.g != 0.0) rec.min_A = std::min(rec.min_A, s.A);
    rec.max_backtracks = std::max(rec.max_backtracks, s.backtracks);
    z = std::move(step.z_next);
    if (full) {
      rec.steps.push_back(s);
      rec.inner_points.push_back(z);
    }
  }
  out.x_next = std::move(z);
  return out;
}

SolveResult solve(const BoxSimplexProblem& p, const Vector& x0, const SolverConfig& config) {
  config.validate();
  require(x0.size() == p.n(), "starting point has wrong dimension");
  if (!is_feasible(p, x0, 1e-9)) throw ContractError("starting point is infeasible");

  SolveResult result;
  result.trace.level = config.trace_level;
  PermutationSource perms(config.permutation, p.n(), config.seed);

  Vector x = x0;
  for (long k = 0;; ++k) {
    OuterRecord rec = describe_point(p, x, k, config);
    if (rec.kkt_residual <= config.kkt_tol) {
      result.status = SolveStatus::Converged;
      result.trace.records.push_back(std::move(rec));
      break;
    }
    if (k >= config.max_outer) {
      result.status = SolveStatus::IterationCap;
      result.trace.records.push_back(std::move(rec));
      break;
    }
    if (rec.Dk <= 0.0) result.trace.vertex_stall = true;
    const Index j = select_j(p, x, config.tau);
    try {
      OuterStep step = outer_iteration(p, x, j, perms.next(), config);
      step.record.k = rec.k;
      step.record.x = std::move(rec.x);
      step.record.f = rec.f;
      step.record.kkt_residual = rec.kkt_residual;
      step.record.lambda = rec.lambda;
      step.record.Dk = rec.Dk;
      step.record.at_bound = std::move(rec.at_bound);
      result.trace.records.push_back(std::move(step.record));
      x = std::move(step.x_next);
    } catch (const LineSearchError& e) {
      result.status = SolveStatus::LineSearchFailure;
      result.diagnostic = "outer iteration " + std::to_string(k) + ": " + e.what();
      result.trace.records.push_back(std::move(rec));
      break;
    }
  }
  result.final_kkt = kkt_certificate(p, result.final_x(), config.active_tol);
  return result;
}

IdentificationResult identification_detector(const BoxSimplexProblem& p, const Trace& trace,
                                             const SolutionCertificate& cert, double tol) {
  require(!trace.records.empty(), "identification_detector: empty trace");
  const Vector& last = trace.records.back().x;
  require(last.size() == cert.x_star.size(), "identification_detector: dimension mismatch");
  if ((last - cert.x_star).lpNorm<Eigen::Infinity>() > tol) {
    throw ContractError("identification_detector: trace did not converge to x*");
  }

  std::vector<bool> active(static_cast<std::size_t>(p.n()), false);
  for (Index i : cert.active) active[static_cast<std::size_t>(i)] = true;

  auto strict_ok = [&](const Vector& x) {
    for (Index h : cert.strict_active) {
      if (x[h] != cert.x_star[h]) return false;
    }
    return true;
  };
  auto inactive_ok = [&](const Vector& x) {
    for (Index h = 0; h < p.n(); ++h) {
      if (active[static_cast<std::size_t>(h)]) continue;
      if (!(p.lower(h) < x[h] && x[h] < p.upper(h))) return false;
    }
    return true;
  };

  // The condition must hold on every record after k; the last record has to
  // satisfy it too, otherwise the tail never settled.
  auto tail_index = [&](auto&& ok) -> std::optional<long> {
    const auto& recs = trace.records;
    if (!ok(recs.back().x)) return std::nullopt;
    long k = 0;
    for (std::size_t r = recs.size(); r-- > 0;) {
      if (!ok(recs[r].x)) {
        k = recs[r].k;
        break;
      }
    }
    return k;
  };

  IdentificationResult out;
  out.kA = tail_index(strict_ok);
  out.kN = tail_index(inactive_ok);
  return out;
}

}  // namespace ac2cd
