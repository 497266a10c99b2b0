#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ac2cd/types.hpp"

namespace ac2cd {

/// Objective oracle for f : R^n -> R with Lipschitz continuous gradient.
///
/// Implementations must be pure from the caller's point of view: the same x
/// always yields the same value and the same partial derivatives. Internal
/// caches are allowed as long as they are guarded.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual Index dimension() const = 0;
  virtual double value(const Vector& x) const = 0;
  virtual double partial(const Vector& x, Index i) const = 0;

  /// Full gradient. The default assembles it from partial derivatives.
  virtual Vector gradient(const Vector& x) const;

  /// f(z + alpha d) - f(z). Quadratic oracles override this with the exact
  /// expansion alpha * grad^T d + alpha^2/2 * d^T H d, which avoids the
  /// cancellation of subtracting two nearly equal function values.
  virtual double value_change(const Vector& z, const Vector& d, double alpha) const;

  /// (e_i - e_j)^T Hess f(x) (e_i - e_j), when cheaply available.
  virtual std::optional<double> pair_curvature(const Vector& x, Index i, Index j) const;

  /// Constant Hessian for quadratic objectives, nullptr otherwise.
  virtual const Matrix* hessian() const { return nullptr; }
};

/// f(x) = 1/2 x^T H x + q^T x + constant, H symmetric.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix H, Vector q, double constant = 0.0);

  Index dimension() const override { return q_.size(); }
  double value(const Vector& x) const override;
  double partial(const Vector& x, Index i) const override;
  Vector gradient(const Vector& x) const override;
  double value_change(const Vector& z, const Vector& d, double alpha) const override;
  std::optional<double> pair_curvature(const Vector& x, Index i, Index j) const override;
  const Matrix* hessian() const override { return &H_; }

  const Vector& linear() const { return q_; }
  double constant() const { return constant_; }

 private:
  Matrix H_;
  Vector q_;
  double constant_;
};

struct OracleCounters {
  long value_calls = 0;
  long partial_calls = 0;
  long gradient_calls = 0;
  /// Multiply-add count, used as a cost proxy.
  long flops = 0;
};

/// f(x) = x^T Q^T Q x - q^T x with Q an m x n factor (SVM-style dual after
/// folding the labels into the variables).
///
/// A partial derivative costs O(m): the product r = Qx is cached and updated
/// only on the coordinates that changed since the previous call. The full
/// gradient recomputes Q^T (Q x) at O(mn).
class FactoredObjective final : public Objective {
 public:
  FactoredObjective(Matrix Q, Vector q);

  Index dimension() const override { return Q_.cols(); }
  double value(const Vector& x) const override;
  double partial(const Vector& x, Index i) const override;
  Vector gradient(const Vector& x) const override;
  double value_change(const Vector& z, const Vector& d, double alpha) const override;
  std::optional<double> pair_curvature(const Vector& x, Index i, Index j) const override;
  const Matrix* hessian() const override { return &H_; }

  const Matrix& factor() const { return Q_; }
  const Vector& linear() const { return q_; }

  OracleCounters counters() const;
  void reset_counters() const;

 private:
  // Brings residual_ = Q * cached_x_ up to date with x. Caller holds mutex_.
  void sync(const Vector& x) const;

  Matrix Q_;
  Vector q_;
  Matrix H_;  // 2 Q^T Q

  mutable std::mutex mutex_;
  mutable bool cache_valid_ = false;
  mutable Vector cached_x_;
  mutable Vector residual_;
  mutable OracleCounters counters_;
};

/// min f(x) s.t. e^T x = b, l <= x <= u, with l_i in R u {-inf},
/// u_i in R u {+inf} and l_i < u_i.
class BoxSimplexProblem {
 public:
  BoxSimplexProblem(Vector lower, Vector upper, double b,
                    std::shared_ptr<const Objective> objective);

  Index n() const { return lower_.size(); }
  double b() const { return b_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  double lower(Index i) const { return lower_[i]; }
  double upper(Index i) const { return upper_[i]; }
  const Objective& objective() const { return *objective_; }
  std::shared_ptr<const Objective> objective_ptr() const { return objective_; }

  double value(const Vector& x) const { return objective_->value(x); }
  double partial(const Vector& x, Index i) const { return objective_->partial(x, i); }
  Vector gradient(const Vector& x) const { return objective_->gradient(x); }

 private:
  Vector lower_;
  Vector upper_;
  double b_;
  std::shared_ptr<const Objective> objective_;
};

enum class BoundTag { AtLower, AtUpper, Interior };

struct KKTCertificate {
  double lambda = 0.0;
  double residual = 0.0;
  std::vector<BoundTag> classification;
};

struct ActiveSets {
  std::vector<Index> active;
  std::vector<Index> strict_active;
};

/// Ground truth about a stationary point, normally produced by the reference
/// oracle or by inverse design in the instance zoo.
struct SolutionCertificate {
  Vector x_star;
  double lambda_star = 0.0;
  double f_star = 0.0;
  std::vector<Index> active;
  std::vector<Index> strict_active;
  std::optional<double> zeta;       // defined iff strict_active is non-empty
  double dmax_star = 0.0;
  std::optional<double> dmin_star;  // defined iff some index is inactive
  std::optional<double> condition_estimate;
};

struct StarDistances {
  double dmax = 0.0;
  double dmin = 0.0;
};

/// A problem together with whatever is known about it.
struct Instance {
  std::string name;
  BoxSimplexProblem problem;
  std::optional<Vector> x0;
  std::optional<double> mu;  // strong convexity modulus, when known
  std::optional<SolutionCertificate> certificate;
};

inline constexpr double kDefaultActiveTol = 1e-8;

bool at_lower(const BoxSimplexProblem& p, const Vector& x, Index i, double tol);
bool at_upper(const BoxSimplexProblem& p, const Vector& x, Index i, double tol);
BoundTag classify(const BoxSimplexProblem& p, const Vector& x, Index i, double tol);

bool is_feasible(const BoxSimplexProblem& p, const Vector& x, double tol);

/// D_h(x) = min{x_h - l_h, u_h - x_h}; +inf when both bounds are infinite.
double distance_to_bound(const BoxSimplexProblem& p, const Vector& x, Index h);
double max_distance(const BoxSimplexProblem& p, const Vector& x);

/// Multiplier estimate by scanning candidate values and keeping the one with
/// the smallest max-violation of the stationarity conditions.
KKTCertificate kkt_certificate(const BoxSimplexProblem& p, const Vector& x,
                               double tol = kDefaultActiveTol);

/// Stationarity residual for a given multiplier.
double kkt_residual(const BoxSimplexProblem& p, const Vector& x, const Vector& grad,
                    double lambda, double tol);

ActiveSets active_sets(const BoxSimplexProblem& p, const Vector& x, double lambda,
                       double tol = kDefaultActiveTol);

/// Minimum |grad_i f(x*) - lambda*| over the strictly active indices.
double zeta(const BoxSimplexProblem& p, const SolutionCertificate& cert);

StarDistances dmax_dmin_star(const BoxSimplexProblem& p, const SolutionCertificate& cert);

/// Fills every derived field of a certificate from (x*, lambda*).
SolutionCertificate make_certificate(const BoxSimplexProblem& p, Vector x_star,
                                     double lambda_star, double tol = kDefaultActiveTol);

/// Euclidean projection onto {e^T x = b, l <= x <= u}, by bisection on the
/// equality multiplier.
Vector project_onto_feasible(const BoxSimplexProblem& p, const Vector& y);

/// Random feasible point: a random box point (infinite sides replaced by
/// offsets of up to `spread`) projected onto the feasible set.
Vector sample_feasible_point(const BoxSimplexProblem& p, std::mt19937_64& rng,
                             double spread = 2.0);

}  // namespace ac2cd
