#pragma once

#include "ac2cd/types.hpp"

namespace ac2cd {

/// <x, y>_j = sum over i != j of x_i y_i.
double inner_j(const Vector& x, const Vector& y, Index j);

/// ||x||_(j) = sqrt(<x, x>_j). Never larger than the Euclidean norm.
double seminorm_j(const Vector& x, Index j);

struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Both sides of v^T (x' - x'') = <v - v_j e, x' - x''>_j. The two points must
/// lie on the same hyperplane e^T x = b.
IdentitySides reduced_product_identity(const Vector& v, const Vector& xp, const Vector& xpp,
                                       Index j);

}  // namespace ac2cd
