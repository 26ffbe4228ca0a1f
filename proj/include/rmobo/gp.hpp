// Single-output GP regression with SE-ARD kernel and MAP training.
// Fitting happens on unit-cube inputs and standardized outputs; the public
// posterior speaks original units. Observations are treated as noise-free,
// with a diagonal jitter of 1e-6 * variance for stability.
#pragma once

#include "rmobo/kernel.hpp"
#include "rmobo/rng.hpp"
#include "rmobo/types.hpp"

namespace rmobo {

struct Normalizer {
  Vector x_shift;  // design-space lower bound
  Vector x_scale;  // design-space range
  double y_mean = 0.0;
  double y_std = 1.0;

  Matrix to_unit_rows(const Matrix& X) const {
    Matrix U = X;
    U.rowwise() -= x_shift.transpose();
    U.array().rowwise() /= x_scale.transpose().array();
    return U;
  }
  Vector to_unit(const Vector& x) const {
    return (x - x_shift).cwiseQuotient(x_scale);
  }
  double standardize(double y) const { return (y - y_mean) / y_std; }
  double destandardize(double ys) const { return y_mean + y_std * ys; }
};

struct FitOptions {
  double prior_log_median = std::log(0.3);  // lengthscale prior, unit cube
  double prior_log_std = 0.7;
  int restarts = 10;
  double ell_lo = 1e-3, ell_hi = 1e2;
  double var_lo = 1e-6, var_hi = 1e4;
  int max_iter = 100;
};

struct GpModel {
  SeArdKernel kernel;  // normalized space
  double jitter = 0.0;  // 1e-6 * kernel.variance, added to the K diagonal
  Matrix X;            // n x d normalized training inputs
  Vector y;            // n standardized observations
  Matrix L;            // lower Cholesky factor of K + jitter * I
  Vector alpha;        // (K + jitter I)^{-1} y
  Normalizer norm;

  Eigen::Index n_train() const { return X.rows(); }

  // Posterior at original-unit test points, original-unit outputs.
  void posterior(const Matrix& X_test, Vector& mean, Vector& var) const;
  void posterior_full(const Matrix& X_test, Vector& mean, Matrix& cov) const;

  // Normalized-space diagonal posterior (standardized outputs).
  void posterior_unit(const Matrix& Xn_test, Vector& mean, Vector& var) const;

  // New model conditioned on one extra observation (original units),
  // hyperparameters and normalizer unchanged; rank-one Cholesky extension.
  GpModel condition_on(const Vector& x, double y_obs) const;
};

// Negative MAP objective (-log marginal likelihood - log prior) over
// theta = [log l_1..log l_d, log variance] for standardized data; fills the
// gradient when grad != nullptr. +inf signals a failed factorization.
double gp_map_neg_objective(const Matrix& Xn, const Vector& ys,
                            const Vector& theta, const FitOptions& opts,
                            Vector* grad);

// MAP fit with multi-restart bounded L-BFGS; X, y in original units.
// Restarts with failed factorizations are discarded; all failing throws.
GpModel fit_map(const Matrix& X, const Vector& y, const DesignSpace& space,
                const FitOptions& opts, RngStream& rng);

// Fixed-hyperparameter constructor (no fitting); used by tests and fixtures.
GpModel make_gp(const Matrix& X, const Vector& y, const DesignSpace& space,
                const SeArdKernel& kernel_unit);

}  // namespace rmobo
