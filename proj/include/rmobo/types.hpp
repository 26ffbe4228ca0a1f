#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace rmobo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Eigen::Ref;

// Axis-aligned design space in original units.
struct DesignSpace {
  Vector lower;
  Vector upper;

  DesignSpace() = default;
  DesignSpace(Vector lo, Vector up) : lower(std::move(lo)), upper(std::move(up)) {
    if (lower.size() != upper.size() || lower.size() < 1)
      throw std::invalid_argument("DesignSpace: dimension mismatch or d < 1");
    for (Eigen::Index i = 0; i < lower.size(); ++i)
      if (!(lower[i] < upper[i]))
        throw std::invalid_argument("DesignSpace: lower must be < upper");
  }

  Eigen::Index dim() const { return lower.size(); }
  Vector range() const { return upper - lower; }

  // Affine map to/from the unit cube. Points outside the space map outside
  // [0,1], which is fine: the enlarged space is handled the same way.
  Vector to_unit(const Vector& x) const {
    return (x - lower).cwiseQuotient(range());
  }
  Vector from_unit(const Vector& u) const {
    return lower + u.cwiseProduct(range());
  }
  Matrix to_unit_rows(const Matrix& X) const {
    Matrix U = X;
    U.rowwise() -= lower.transpose();
    U.array().rowwise() /= range().transpose().array();
    return U;
  }
  Matrix from_unit_rows(const Matrix& U) const {
    Matrix X = U;
    X.array().rowwise() *= range().transpose().array();
    X.rowwise() += lower.transpose();
    return X;
  }
};

}  // namespace rmobo
