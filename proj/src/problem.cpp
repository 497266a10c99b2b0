#include "ac2cd/problem.hpp"

#include <algorithm>
#include <cmath>

namespace ac2cd {

namespace {

void check_dimension(const BoxSimplexProblem& p, const Vector& x) {
  if (x.size() != p.n()) {
    throw ContractError("dimension mismatch: expected " + std::to_string(p.n()) + ", got " +
                        std::to_string(x.size()));
  }
}

void check_index(const BoxSimplexProblem& p, Index i) {
  if (i < 0 || i >= p.n()) throw ContractError("index out of range: " + std::to_string(i));
}

// Indices where d is non-zero.
std::vector<Index> support(const Vector& d) {
  std::vector<Index> s;
  for (Index i = 0; i < d.size(); ++i) {
    if (d[i] != 0.0) s.push_back(i);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Objective

Vector Objective::gradient(const Vector& x) const {
  Vector g(dimension());
  for (Index i = 0; i < g.size(); ++i) g[i] = partial(x, i);
  return g;
}

double Objective::value_change(const Vector& z, const Vector& d, double alpha) const {
  return value(z + alpha * d) - value(z);
}

std::optional<double> Objective::pair_curvature(const Vector&, Index, Index) const {
  return std::nullopt;
}

QuadraticObjective::QuadraticObjective(Matrix H, Vector q, double constant)
    : H_(std::move(H)), q_(std::move(q)), constant_(constant) {
  require(H_.rows() == H_.cols(), "Hessian must be square");
  require(H_.rows() == q_.size(), "Hessian and linear term sizes differ");
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(H_ * x) + q_.dot(x) + constant_;
}

double QuadraticObjective::partial(const Vector& x, Index i) const {
  return H_.row(i).dot(x) + q_[i];
}

Vector QuadraticObjective::gradient(const Vector& x) const { return H_ * x + q_; }

double QuadraticObjective::value_change(const Vector& z, const Vector& d, double alpha) const {
  const std::vector<Index> s = support(d);
  double slope = 0.0;
  double curvature = 0.0;
  for (Index a : s) {
    slope += partial(z, a) * d[a];
    for (Index c : s) curvature += d[a] * H_(a, c) * d[c];
  }
  return alpha * slope + 0.5 * alpha * alpha * curvature;
}

std::optional<double> QuadraticObjective::pair_curvature(const Vector&, Index i, Index j) const {
  return H_(i, i) + H_(j, j) - 2.0 * H_(i, j);
}

FactoredObjective::FactoredObjective(Matrix Q, Vector q)
    : Q_(std::move(Q)), q_(std::move(q)) {
  require(Q_.cols() == q_.size(), "factor columns and linear term sizes differ");
  H_ = 2.0 * Q_.transpose() * Q_;
}

void FactoredObjective::sync(const Vector& x) const {
  const Index m = Q_.rows();
  if (!cache_valid_) {
    residual_ = Q_ * x;
    cached_x_ = x;
    cache_valid_ = true;
    counters_.flops += m * Q_.cols();
    return;
  }
  for (Index h = 0; h < x.size(); ++h) {
    const double change = x[h] - cached_x_[h];
    if (change != 0.0) {
      residual_.noalias() += change * Q_.col(h);
      cached_x_[h] = x[h];
      counters_.flops += m;
    }
  }
}

double FactoredObjective::value(const Vector& x) const {
  std::lock_guard lock(mutex_);
  ++counters_.value_calls;
  sync(x);
  counters_.flops += Q_.rows() + x.size();
  return residual_.squaredNorm() - q_.dot(x);
}

double FactoredObjective::partial(const Vector& x, Index i) const {
  std::lock_guard lock(mutex_);
  ++counters_.partial_calls;
  sync(x);
  counters_.flops += Q_.rows();
  return 2.0 * Q_.col(i).dot(residual_) - q_[i];
}

Vector FactoredObjective::gradient(const Vector& x) const {
  std::lock_guard lock(mutex_);
  ++counters_.gradient_calls;
  const Vector r = Q_ * x;
  counters_.flops += 2 * Q_.rows() * Q_.cols();
  return 2.0 * Q_.transpose() * r - q_;
}

double FactoredObjective::value_change(const Vector& z, const Vector& d, double alpha) const {
  std::lock_guard lock(mutex_);
  sync(z);
  Vector Qd = Vector::Zero(Q_.rows());
  double slope = 0.0;
  for (Index a : support(d)) {
    Qd.noalias() += d[a] * Q_.col(a);
    slope += (2.0 * Q_.col(a).dot(residual_) - q_[a]) * d[a];
    counters_.flops += 2 * Q_.rows();
  }
  return alpha * slope + alpha * alpha * Qd.squaredNorm();
}

std::optional<double> FactoredObjective::pair_curvature(const Vector&, Index i, Index j) const {
  return 2.0 * (Q_.col(i) - Q_.col(j)).squaredNorm();
}

OracleCounters FactoredObjective::counters() const {
  std::lock_guard lock(mutex_);
  return counters_;
}

void FactoredObjective::reset_counters() const {
  std::lock_guard lock(mutex_);
  counters_ = {};
}

// ---------------------------------------------------------------------------
// Problem

BoxSimplexProblem::BoxSimplexProblem(Vector lower, Vector upper, double b,
                                     std::shared_ptr<const Objective> objective)
    : lower_(std::move(lower)), upper_(std::move(upper)), b_(b), objective_(std::move(objective)) {
  require(lower_.size() >= 2, "problem needs n >= 2");
  require(lower_.size() == upper_.size(), "bound vectors differ in length");
  require(objective_ != nullptr, "problem needs an objective");
  require(objective_->dimension() == lower_.size(), "objective dimension differs from bounds");
  require(std::isfinite(b_), "b must be finite");
  for (Index i = 0; i < lower_.size(); ++i) {
    require(lower_[i] < upper_[i], "bounds must satisfy l_i < u_i (index " + std::to_string(i) + ")");
    require(lower_[i] != kInf && upper_[i] != -kInf, "lower bound +inf or upper bound -inf");
  }
}

bool at_lower(const BoxSimplexProblem& p, const Vector& x, Index i, double tol) {
  const double l = p.lower(i);
  if (!std::isfinite(l)) return false;
  return std::abs(x[i] - l) <= tol * std::max(1.0, std::abs(l));
}

bool at_upper(const BoxSimplexProblem& p, const Vector& x, Index i, double tol) {
  const double u = p.upper(i);
  if (!std::isfinite(u)) return false;
  return std::abs(u - x[i]) <= tol * std::max(1.0, std::abs(u));
}

BoundTag classify(const BoxSimplexProblem& p, const Vector& x, Index i, double tol) {
  if (at_lower(p, x, i, tol)) return BoundTag::AtLower;
  if (at_upper(p, x, i, tol)) return BoundTag::AtUpper;
  return BoundTag::Interior;
}

bool is_feasible(const BoxSimplexProblem& p, const Vector& x, double tol) {
  check_dimension(p, x);
  require(tol >= 0.0, "tolerance must be non-negative");
  if (std::abs(x.sum() - p.b()) > tol * std::max(1.0, std::abs(p.b()))) return false;
  for (Index i = 0; i < p.n(); ++i) {
    if (!std::isfinite(x[i])) return false;
    if (x[i] < p.lower(i) - tol || x[i] > p.upper(i) + tol) return false;
  }
  return true;
}

double distance_to_bound(const BoxSimplexProblem& p, const Vector& x, Index h) {
  check_dimension(p, x);
  check_index(p, h);
  return std::min(x[h] - p.lower(h), p.upper(h) - x[h]);
}

double max_distance(const BoxSimplexProblem& p, const Vector& x) {
  check_dimension(p, x);
  double d = -kInf;
  for (Index h = 0; h < p.n(); ++h) d = std::max(d, distance_to_bound(p, x, h));
  return d;
}

double kkt_residual(const BoxSimplexProblem& p, const Vector& x, const Vector& grad,
                    double lambda, double tol) {
  double worst = 0.0;
  for (Index i = 0; i < p.n(); ++i) {
    double v = 0.0;
    switch (classify(p, x, i, tol)) {
      case BoundTag::AtLower: v = std::max(0.0, lambda - grad[i]); break;
      case BoundTag::AtUpper: v = std::max(0.0, grad[i] - lambda); break;
      case BoundTag::Interior: v = std::abs(grad[i] - lambda); break;
    }
    worst = std::max(worst, v);
  }
  return worst;
}

KKTCertificate kkt_certificate(const BoxSimplexProblem& p, const Vector& x, double tol) {
  check_dimension(p, x);
  const Vector grad = p.gradient(x);

  KKTCertificate cert;
  cert.classification.resize(static_cast<std::size_t>(p.n()));
  std::vector<double> candidates;
  for (Index i = 0; i < p.n(); ++i) {
    cert.classification[static_cast<std::size_t>(i)] = classify(p, x, i, tol);
    if (cert.classification[static_cast<std::size_t>(i)] == BoundTag::Interior) {
      candidates.push_back(grad[i]);
    }
  }
  if (candidates.empty()) candidates.assign(grad.data(), grad.data() + grad.size());

  cert.residual = kInf;
  for (double lambda : candidates) {
    const double r = kkt_residual(p, x, grad, lambda, tol);
    if (r < cert.residual) {
      cert.residual = r;
      cert.lambda = lambda;
    }
  }
  return cert;
}

ActiveSets active_sets(const BoxSimplexProblem& p, const Vector& x, double lambda, double tol) {
  check_dimension(p, x);
  ActiveSets sets;
  const Vector grad = p.gradient(x);
  for (Index i = 0; i < p.n(); ++i) {
    if (classify(p, x, i, tol) == BoundTag::Interior) continue;
    sets.active.push_back(i);
    if (std::abs(grad[i] - lambda) > tol) sets.strict_active.push_back(i);
  }
  return sets;
}

double zeta(const BoxSimplexProblem& p, const SolutionCertificate& cert) {
  if (cert.strict_active.empty()) {
    throw UndefinedQuantity("zeta undefined: no strictly active index");
  }
  const Vector grad = p.gradient(cert.x_star);
  double z = kInf;
  for (Index i : cert.strict_active) z = std::min(z, std::abs(grad[i] - cert.lambda_star));
  return z;
}

StarDistances dmax_dmin_star(const BoxSimplexProblem& p, const SolutionCertificate& cert) {
  if (static_cast<Index>(cert.active.size()) >= p.n()) {
    throw UndefinedQuantity("D*min undefined: every index is active");
  }
  StarDistances out{max_distance(p, cert.x_star), kInf};
  std::vector<bool> is_active(static_cast<std::size_t>(p.n()), false);
  for (Index i : cert.active) is_active[static_cast<std::size_t>(i)] = true;
  for (Index i = 0; i < p.n(); ++i) {
    if (!is_active[static_cast<std::size_t>(i)]) {
      out.dmin = std::min(out.dmin, distance_to_bound(p, cert.x_star, i));
    }
  }
  return out;
}

SolutionCertificate make_certificate(const BoxSimplexProblem& p, Vector x_star,
                                     double lambda_star, double tol) {
  check_dimension(p, x_star);
  SolutionCertificate cert;
  cert.x_star = std::move(x_star);
  cert.lambda_star = lambda_star;
  cert.f_star = p.value(cert.x_star);
  ActiveSets sets = active_sets(p, cert.x_star, lambda_star, tol);
  cert.active = std::move(sets.active);
  cert.strict_active = std::move(sets.strict_active);
  if (!cert.strict_active.empty()) cert.zeta = zeta(p, cert);
  cert.dmax_star = max_distance(p, cert.x_star);
  if (static_cast<Index>(cert.active.size()) < p.n()) cert.dmin_star = dmax_dmin_star(p, cert).dmin;
  return cert;
}

Vector project_onto_feasible(const BoxSimplexProblem& p, const Vector& y) {
  check_dimension(p, y);
  const Vector& l = p.lower();
  const Vector& u = p.upper();
  if (l.sum() > p.b() || u.sum() < p.b()) {
    throw ContractError("feasible set is empty: b outside [sum l, sum u]");
  }
  auto clipped = [&](double theta) {
    Vector x(y.size());
    for (Index i = 0; i < y.size(); ++i) x[i] = std::clamp(y[i] - theta, l[i], u[i]);
    return x;
  };
  // s(theta) = e^T clip(y - theta) is non-increasing in theta.
  double lo = -1.0;
  double hi = 1.0;
  while (clipped(lo).sum() < p.b()) lo *= 2.0;
  while (clipped(hi).sum() > p.b()) hi *= 2.0;
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (clipped(mid).sum() > p.b()) lo = mid; else hi = mid;
  }
  Vector x = clipped(0.5 * (lo + hi));

  // Push the leftover rounding in e^T x onto the coordinate with the most room.
  const double excess = x.sum() - p.b();
  if (excess != 0.0) {
    Index best = -1;
    double room = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
      const double r = excess > 0.0 ? x[i] - l[i] : u[i] - x[i];
      if (r > room) {
        room = r;
        best = i;
      }
    }
    if (best >= 0 && room >= std::abs(excess)) x[best] -= excess;
  }
  return x;
}

Vector sample_feasible_point(const BoxSimplexProblem& p, std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector y(p.n());
  for (Index i = 0; i < p.n(); ++i) {
    const double l = p.lower(i);
    const double u = p.upper(i);
    const double t = unit(rng);
    if (std::isfinite(l) && std::isfinite(u)) {
      y[i] = l + t * (u - l);
    } else if (std::isfinite(l)) {
      y[i] = l + t * spread;
    } else if (std::isfinite(u)) {
      y[i] = u - t * spread;
    } else {
      y[i] = (2.0 * t - 1.0) * spread;
    }
  }
  return project_onto_feasible(p, y);
}

}  // namespace ac2cd
