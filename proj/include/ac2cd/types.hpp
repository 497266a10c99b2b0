#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ac2cd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A caller broke a documented precondition (dimension mismatch, bad index,
/// parameter out of range).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The Armijo loop ran out of backtracks. With a correct oracle this does not
/// happen, so it usually points at an inconsistent value/derivative pair.
class LineSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quantity is requested outside the set where it is defined
/// (zeta with no strictly active index, D*min with every index active, ...).
class UndefinedQuantity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure inside a reference computation.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed instance / config / trace input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

}  // namespace ac2cd
