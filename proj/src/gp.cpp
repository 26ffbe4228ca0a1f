#include "rmobo/gp.hpp"

#include <cmath>
#include <stdexcept>

#include "rmobo/lbfgsb.hpp"

namespace rmobo {

namespace {

constexpr double kJitterRel = 1e-6;

// Cholesky of K + jitter I; false on failure.
bool chol_gram(const SeArdKernel& k, double jitter, const Matrix& Xn,
               Matrix& L) {
  Matrix K = kernel_eval(k, Xn, Xn);
  K.diagonal().array() += jitter;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success) return false;
  L = llt.matrixL();
  return true;
}

}  // namespace

void GpModel::posterior_unit(const Matrix& Xn_test, Vector& mean,
                             Vector& var) const {
  const Matrix Ks = kernel_eval(kernel, Xn_test, X);  // m x n
  mean.noalias() = Ks * alpha;
  const Matrix V =
      L.triangularView<Eigen::Lower>().solve(Ks.transpose());  // n x m
  var = (kernel.variance - V.colwise().squaredNorm().array())
            .max(0.0)
            .matrix()
            .transpose();
}

void GpModel::posterior(const Matrix& X_test, Vector& mean, Vector& var) const {
  Vector m_std, v_std;
  posterior_unit(norm.to_unit_rows(X_test), m_std, v_std);
  mean = (m_std.array() * norm.y_std + norm.y_mean).matrix();
  var = v_std * (norm.y_std * norm.y_std);
}

void GpModel::posterior_full(const Matrix& X_test, Vector& mean,
                             Matrix& cov) const {
  const Matrix Xn = norm.to_unit_rows(X_test);
  const Matrix Ks = kernel_eval(kernel, Xn, X);
  const Matrix V = L.triangularView<Eigen::Lower>().solve(Ks.transpose());
  Vector m_std = Ks * alpha;
  Matrix c_std = kernel_eval(kernel, Xn, Xn);
  c_std.noalias() -= V.transpose() * V;
  c_std = 0.5 * (c_std + c_std.transpose()).eval();
  mean = (m_std.array() * norm.y_std + norm.y_mean).matrix();
  cov = c_std * (norm.y_std * norm.y_std);
}

GpModel GpModel::condition_on(const Vector& x, double y_obs) const {
  GpModel out = *this;
  const Eigen::Index n = X.rows();
  const Vector xn = norm.to_unit(x);
  out.X.conservativeResize(n + 1, Eigen::NoChange);
  out.X.row(n) = xn.transpose();
  out.y.conservativeResize(n + 1);
  out.y[n] = norm.standardize(y_obs);

  const Vector k = kernel_vector(kernel, xn, X);
  const Vector l = L.triangularView<Eigen::Lower>().solve(k);
  double lam2 = kernel.variance + jitter - l.squaredNorm();
  lam2 = std::max(lam2, 1e-12 * kernel.variance);  // coincident-point guard
  out.L.setZero(n + 1, n + 1);
  out.L.topLeftCorner(n, n) = L;
  out.L.row(n).head(n) = l.transpose();
  out.L(n, n) = std::sqrt(lam2);

  out.alpha = out.L.triangularView<Eigen::Lower>().solve(out.y);
  out.L.triangularView<Eigen::Lower>().transpose().solveInPlace(out.alpha);
  return out;
}

double gp_map_neg_objective(const Matrix& Xn, const Vector& ys,
                            const Vector& theta, const FitOptions& opts,
                            Vector* grad) {
  const Eigen::Index d = Xn.cols();
  const Eigen::Index n = Xn.rows();
  SeArdKernel k;
  k.lengthscales = theta.head(d).array().exp();
  k.variance = std::exp(theta[d]);
  const double jitter = kJitterRel * k.variance;

  Matrix K = kernel_eval(k, Xn, Xn);
  K.diagonal().array() += jitter;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() != Eigen::Success)
    return std::numeric_limits<double>::infinity();
  const Matrix L = llt.matrixL();
  Vector alpha = llt.solve(ys);

  double lml = -0.5 * ys.dot(alpha) -
               L.diagonal().array().log().sum() -
               0.5 * n * std::log(2.0 * M_PI);
  // Gaussian prior on the log-lengthscales (log-normal on lengthscales).
  double lprior = 0.0;
  const double inv_s2 = 1.0 / (opts.prior_log_std * opts.prior_log_std);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double z = theta[i] - opts.prior_log_median;
    lprior -= 0.5 * z * z * inv_s2;
  }

  if (grad) {
    grad->resize(d + 1);
    const Matrix Kinv = llt.solve(Matrix::Identity(n, n));
    const Matrix W = alpha * alpha.transpose() - Kinv;  // d lml = 0.5 tr(W dK)
    // d/dlog(var): both the signal term and the jitter scale with variance,
    // so dK/dlog(var) = K.
    (*grad)[d] = -0.5 * (W.array() * K.array()).sum();
    for (Eigen::Index m = 0; m < d; ++m) {
      const Vector c = Xn.col(m);
      const double inv_l2 =
          1.0 / (k.lengthscales[m] * k.lengthscales[m]);
      // dK/dlog(l_m) = (K - jitter I) .* D, D_ij = (x_im - x_jm)^2 / l_m^2
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
          const double diff = c[i] - c[j];
          const double kij = K(i, j) - (i == j ? jitter : 0.0);
          acc += W(i, j) * kij * diff * diff * inv_l2;
        }
      (*grad)[m] = -0.5 * acc + (theta[m] - opts.prior_log_median) * inv_s2;
    }
  }
  return -(lml + lprior);
}

GpModel fit_map(const Matrix& X, const Vector& y, const DesignSpace& space,
                const FitOptions& opts, RngStream& rng) {
  if (X.rows() < 2) throw std::invalid_argument("fit_map: n < 2");
  if (X.rows() != y.size()) throw std::invalid_argument("fit_map: size");
  if (!X.allFinite() || !y.allFinite())
    throw std::invalid_argument("fit_map: non-finite inputs");

  Normalizer norm;
  norm.x_shift = space.lower;
  norm.x_scale = space.range();
  norm.y_mean = y.mean();
  const double sd =
      std::sqrt((y.array() - norm.y_mean).square().sum() / y.size());
  norm.y_std = sd > 1e-12 ? sd : 1.0;

  const Matrix Xn = norm.to_unit_rows(X);
  const Vector ys = (y.array() - norm.y_mean).matrix() / norm.y_std;
  const Eigen::Index d = X.cols();

  Vector lo(d + 1), hi(d + 1);
  lo.head(d).setConstant(std::log(opts.ell_lo));
  hi.head(d).setConstant(std::log(opts.ell_hi));
  lo[d] = std::log(opts.var_lo);
  hi[d] = std::log(opts.var_hi);

  const BoundedObjective obj = [&](const Vector& th, Vector& g) {
    return gp_map_neg_objective(Xn, ys, th, opts, &g);
  };

  LbfgsOptions lopts;
  lopts.max_iter = opts.max_iter;
  bool any = false;
  double best_f = std::numeric_limits<double>::infinity();
  Vector best_theta;
  for (int r = 0; r < opts.restarts; ++r) {
    Vector theta(d + 1);
    if (r == 0) {
      theta.head(d).setConstant(opts.prior_log_median);
      theta[d] = 0.0;
    } else {
      for (Eigen::Index i = 0; i < d; ++i)
        theta[i] = opts.prior_log_median + opts.prior_log_std * rng.normal();
      theta[d] = 0.5 * rng.normal();
    }
    const LbfgsResult res = minimize_bounded(obj, theta, lo, hi, lopts);
    if (!std::isfinite(res.f)) continue;  // discarded restart
    if (res.f < best_f) {
      best_f = res.f;
      best_theta = res.x;
      any = true;
    }
  }
  if (!any) throw std::runtime_error("fit_map: all restarts failed");

  GpModel model;
  model.norm = norm;
  model.kernel.lengthscales = best_theta.head(d).array().exp();
  model.kernel.variance = std::exp(best_theta[d]);
  model.jitter = kJitterRel * model.kernel.variance;
  model.X = Xn;
  model.y = ys;
  if (!chol_gram(model.kernel, model.jitter, Xn, model.L))
    throw std::runtime_error("fit_map: factorization failed at optimum");
  model.alpha = model.L.triangularView<Eigen::Lower>().solve(ys);
  model.L.triangularView<Eigen::Lower>().transpose().solveInPlace(model.alpha);
  return model;
}

GpModel make_gp(const Matrix& X, const Vector& y, const DesignSpace& space,
                const SeArdKernel& kernel_unit) {
  kernel_unit.validate();
  GpModel model;
  model.norm.x_shift = space.lower;
  model.norm.x_scale = space.range();
  model.norm.y_mean = y.mean();
  const double sd =
      std::sqrt((y.array() - model.norm.y_mean).square().sum() / y.size());
  model.norm.y_std = sd > 1e-12 ? sd : 1.0;
  model.kernel = kernel_unit;
  model.jitter = kJitterRel * kernel_unit.variance;
  model.X = model.norm.to_unit_rows(X);
  model.y = (y.array() - model.norm.y_mean).matrix() / model.norm.y_std;
  if (!chol_gram(model.kernel, model.jitter, model.X, model.L))
    throw std::runtime_error("make_gp: factorization failed");
  model.alpha = model.L.triangularView<Eigen::Lower>().solve(model.y);
  model.L.triangularView<Eigen::Lower>().transpose().solveInPlace(model.alpha);
  return model;
}

}  // namespace rmobo
