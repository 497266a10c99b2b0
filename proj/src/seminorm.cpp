#include "ac2cd/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ac2cd {

namespace {

void check_index(Index size, Index j) {
  if (j < 0 || j >= size) throw ContractError("excluded index out of range: " + std::to_string(j));
}

}  // namespace

double inner_j(const Vector& x, const Vector& y, Index j) {
  require(x.size() == y.size(), "inner_j: vectors differ in length");
  check_index(x.size(), j);
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (i != j) s += x[i] * y[i];
  }
  return s;
}

double seminorm_j(const Vector& x, Index j) {
  check_index(x.size(), j);
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    if (i != j) s += x[i] * x[i];
  }
  return std::sqrt(s);
}

IdentitySides reduced_product_identity(const Vector& v, const Vector& xp, const Vector& xpp,
                                       Index j) {
  require(v.size() == xp.size() && xp.size() == xpp.size(),
          "reduced_product_identity: vectors differ in length");
  check_index(v.size(), j);
  const double bp = xp.sum();
  const double bpp = xpp.sum();
  const double scale = std::max({1.0, xp.cwiseAbs().sum(), xpp.cwiseAbs().sum()});
  if (std::abs(bp - bpp) > 1e-12 * scale) {
    throw ContractError("reduced_product_identity: points lie on different hyperplanes");
  }
  const Vector diff = xp - xpp;
  IdentitySides out;
  out.lhs = v.dot(diff);
  double rhs = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (i != j) rhs += (v[i] - v[j]) * diff[i];
  }
  out.rhs = rhs;
  return out;
}

}  // namespace ac2cd
