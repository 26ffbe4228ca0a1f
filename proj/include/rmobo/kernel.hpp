// Squared-exponential ARD kernel and batched evaluation helpers.
#pragma once

#include <stdexcept>

#include "rmobo/types.hpp"

namespace rmobo {

struct SeArdKernel {
  double variance = 1.0;   // sigma^2, k(x, x) = variance exactly
  Vector lengthscales;     // d positive reals

  void validate() const {
    if (variance <= 0.0) throw std::invalid_argument("kernel: variance <= 0");
    for (Eigen::Index i = 0; i < lengthscales.size(); ++i)
      if (lengthscales[i] <= 0.0)
        throw std::invalid_argument("kernel: lengthscale <= 0");
  }
};

// out(i, j) = variance * exp(-0.5 * sum_k ((A_ik - B_jk) / l_k)^2).
// Writes into a preallocated out (resized as needed); A, B have d columns.
inline void kernel_eval_into(const SeArdKernel& k, const Ref<const Matrix>& A,
                             const Ref<const Matrix>& B, Matrix& out) {
  const Eigen::Index d = k.lengthscales.size();
  if (A.cols() != d || B.cols() != d)
    throw std::invalid_argument("kernel_eval: column count != d");
  const Vector inv_l = k.lengthscales.cwiseInverse();
  const Matrix As = A * inv_l.asDiagonal();
  const Matrix Bs = B * inv_l.asDiagonal();
  const Vector a2 = As.rowwise().squaredNorm();
  const Vector b2 = Bs.rowwise().squaredNorm();
  out.noalias() = As * Bs.transpose();
  out *= -2.0;
  out.colwise() += a2;
  out.rowwise() += b2.transpose();
  out = (out.array().max(0.0) * -0.5).exp() * k.variance;
}

inline Matrix kernel_eval(const SeArdKernel& k, const Ref<const Matrix>& A,
                          const Ref<const Matrix>& B) {
  Matrix out;
  kernel_eval_into(k, A, B, out);
  return out;
}

// Row vector of k(x, B_j) for a single left point.
inline Vector kernel_vector(const SeArdKernel& k, const Vector& x,
                            const Ref<const Matrix>& B) {
  return kernel_eval(k, x.transpose(), B).transpose();
}

// d/dx_m k(x, B_j) = -k(x, B_j) * (x_m - B_jm) / l_m^2; returns n x d.
inline Matrix kernel_vector_grad(const SeArdKernel& k, const Vector& x,
                                 const Ref<const Matrix>& B) {
  const Vector kv = kernel_vector(k, x, B);
  Matrix g(B.rows(), x.size());
  const Vector inv_l2 = k.lengthscales.cwiseProduct(k.lengthscales).cwiseInverse();
  for (Eigen::Index j = 0; j < B.rows(); ++j)
    g.row(j) = -kv[j] * (x.transpose() - B.row(j)).cwiseProduct(inv_l2.transpose());
  return g;
}

}  // namespace rmobo
