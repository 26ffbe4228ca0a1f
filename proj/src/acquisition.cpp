#include "rmobo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rmobo/lbfgsb.hpp"
#include "rmobo/pareto.hpp"
#include "rmobo/rng.hpp"

namespace rmobo {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

void RobustPosteriorProvider::diag(const Matrix& X, Matrix& mean,
                                   Matrix& var) const {
  const RobustPosterior p = robust_posterior(*rgp_, X, threads_);
  mean = p.mean;
  var = p.var;
}

void RobustPosteriorProvider::joint(const Matrix& Xq, Matrix& mean,
                                    std::vector<Matrix>& cov) const {
  RobustPosteriorFull p = robust_posterior_full(*rgp_, Xq, threads_);
  mean = std::move(p.mean);
  cov = std::move(p.cov);
}

Vector ehvi_reference(const Matrix& front) {
  const Vector lo = front.colwise().minCoeff();
  const Vector hi = front.colwise().maxCoeff();
  Vector ref(lo.size());
  for (Eigen::Index j = 0; j < lo.size(); ++j) {
    double width = 0.1 * (hi[j] - lo[j]);
    if (width <= 0.0) width = std::max(0.1 * std::abs(lo[j]), 0.1);
    ref[j] = lo[j] - width;
  }
  return ref;
}

namespace {

// E[(Z - t)^+] for Z ~ N(mu, sd^2); deterministic limit at sd = 0.
double gauss_ei(double mu, double sd, double t) {
  if (!std::isfinite(t)) return 0.0;  // t = +inf sentinel
  if (sd <= 0.0) return std::max(mu - t, 0.0);
  const double u = (mu - t) / sd;
  return sd * normal_pdf(u) + (mu - t) * normal_cdf(u);
}

}  // namespace

double ehvi_analytic(const Matrix& front, const Vector& ref, const Vector& mu,
                     const Vector& sd) {
  if (front.cols() != 2 || ref.size() != 2)
    throw std::invalid_argument("ehvi_analytic: M != 2");
  // Keep only points whose ref-box is non-empty, sorted by falling obj-0
  // (hence rising obj-1 on a non-dominated set).
  std::vector<std::pair<double, double>> pts;
  for (Eigen::Index i = 0; i < front.rows(); ++i)
    if (front(i, 0) > ref[0] && front(i, 1) > ref[1])
      pts.emplace_back(front(i, 0), front(i, 1));
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  // Strip s spans obj-0 in [c_{s+1}, c_s]; everything right of c_s is
  // attained up to height H_s. Independence factorizes each strip term.
  const size_t k = pts.size();
  double total = 0.0;
  double ei1_right = 0.0;  // EI_1(c_0 = +inf)
  for (size_t s = 0; s <= k; ++s) {
    const double c_next = (s == k) ? ref[0] : pts[s].first;
    const double h = (s == 0) ? ref[1] : pts[s - 1].second;
    const double ei1_left = gauss_ei(mu[0], sd[0], c_next);
    total += (ei1_left - ei1_right) * gauss_ei(mu[1], sd[1], h);
    ei1_right = ei1_left;
  }
  return std::max(total, 0.0);
}

double ehvi(const AcquisitionContext& ctx, const Vector& x) {
  Matrix mean, var;
  ctx.posterior->diag(x.transpose(), mean, var);
  const Vector mu = mean.row(0);
  const Vector sd = var.row(0).cwiseMax(0.0).cwiseSqrt();
  return ehvi_analytic(ctx.front, ctx.ref, mu, sd);
}

double qehvi(const AcquisitionContext& ctx, const Matrix& Xq) {
  const int M = ctx.posterior->num_objectives();
  if (M != 2) throw std::invalid_argument("qehvi: M != 2");
  const Eigen::Index q = Xq.rows();
  if (ctx.base_samples.cols() < q * M)
    throw std::invalid_argument("qehvi: base samples too narrow for batch");

  Matrix mean;
  std::vector<Matrix> cov;
  ctx.posterior->joint(Xq, mean, cov);
  std::vector<Matrix> chol(M);
  for (int i = 0; i < M; ++i) {
    Eigen::LLT<Matrix> llt(cov[i]);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("qehvi: covariance not PD after repair");
    chol[i] = llt.matrixL();
  }

  const double hv_base = hypervolume_2d(ctx.front, ctx.ref);
  const Eigen::Index n_base = ctx.base_samples.rows();
  Matrix joined(ctx.front.rows() + q, 2);
  joined.topRows(ctx.front.rows()) = ctx.front;
  double acc = 0.0;
  Vector z(q), j_draw(q);
  for (Eigen::Index s = 0; s < n_base; ++s) {
    for (int i = 0; i < M; ++i) {
      z = ctx.base_samples.row(s).segment(i * q, q);
      j_draw = mean.col(i) + chol[i] * z;
      joined.bottomRows(q).col(i) = j_draw;
    }
    acc += hypervolume_2d(joined, ctx.ref) - hv_base;
  }
  return acc / static_cast<double>(n_base);
}

BatchObjective make_acquisition_batch(const AcquisitionContext& ctx, int q,
                                      Eigen::Index dim) {
  if (q == 1) {
    return [&ctx](const Matrix& X) {
      Matrix mean, var;
      ctx.posterior->diag(X, mean, var);
      Vector out(X.rows());
      for (Eigen::Index r = 0; r < X.rows(); ++r)
        out[r] = ehvi_analytic(ctx.front, ctx.ref, mean.row(r),
                               var.row(r).cwiseMax(0.0).cwiseSqrt());
      return out;
    };
  }
  return [&ctx, q, dim](const Matrix& X) {
    Vector out(X.rows());
    Matrix Xq(q, dim);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      for (int j = 0; j < q; ++j)
        Xq.row(j) = X.row(r).segment(j * dim, dim);
      out[r] = qehvi(ctx, Xq);
    }
    return out;
  };
}

bool al_activation(const Vector& x_star, const Matrix& X_train,
                   const DesignSpace& space, double eps) {
  if (eps < 0.0) throw std::invalid_argument("al_activation: eps < 0");
  const Vector xn = space.to_unit(x_star);
  if (xn.minCoeff() < eps) return true;                  // lower boundary
  if ((1.0 - xn.array()).minCoeff() < eps) return true;  // upper boundary
  const Matrix Xn = space.to_unit_rows(X_train);
  for (Eigen::Index i = 0; i < Xn.rows(); ++i)
    if ((Xn.row(i).transpose() - xn).norm() < eps) return true;  // duplicate
  return false;
}

AlScorer::AlScorer(const RobustGp& rgp, const Vector& x_star) : rgp_(&rgp) {
  const int M = rgp.num_objectives();
  xstar_n_ = rgp.models[0].norm.to_unit(x_star);
  n_eff_ = rgp.samples.all_zero() ? 1 : rgp.samples.count();
  num_var_.resize(M);
  kbar_.resize(M);
  U_.resize(M);
  V_.resize(M);
  const Vector x_scale = rgp.models[0].norm.x_scale;
  for (int i = 0; i < M; ++i) {
    const GpModel& g = rgp.models[i];
    Matrix shifted_E(n_eff_, xstar_n_.size());
    Matrix shifted_E2(n_eff_, xstar_n_.size());
    for (Eigen::Index s = 0; s < n_eff_; ++s) {
      shifted_E.row(s) = (xstar_n_ + rgp.samples.E.row(s).transpose()
                                         .cwiseQuotient(x_scale))
                             .transpose();
      shifted_E2.row(s) = (xstar_n_ + rgp.samples.E2.row(s).transpose()
                                          .cwiseQuotient(x_scale))
                              .transpose();
    }
    const Matrix A = kernel_eval(g.kernel, shifted_E, g.X);  // N x n
    const Matrix B = kernel_eval(g.kernel, shifted_E2, g.X);
    U_[i] = g.L.triangularView<Eigen::Lower>().solve(A.transpose());
    V_[i] = g.L.triangularView<Eigen::Lower>().solve(B.transpose());
    double kb = 0.0;
    for (Eigen::Index s = 0; s < n_eff_; ++s)
      kb += g.kernel.variance *
            std::exp(-0.5 * ((shifted_E.row(s) - shifted_E2.row(s))
                                 .cwiseQuotient(g.kernel.lengthscales
                                                    .transpose())
                                 .squaredNorm()));
    kbar_[i] = kb / static_cast<double>(n_eff_);
    const double quad =
        (U_[i].array() * V_[i].array()).sum() / static_cast<double>(n_eff_);
    num_var_[i] = std::max(kbar_[i] - quad, 0.0);
  }
}

double AlScorer::score(const Vector& x) const {
  const Vector xn = rgp_->models[0].norm.to_unit(x);
  double alpha = 0.0;
  const Vector x_scale = rgp_->models[0].norm.x_scale;
  for (int i = 0; i < rgp_->num_objectives(); ++i) {
    const GpModel& g = rgp_->models[i];
    const double floor = g.jitter;
    const Vector kx = kernel_vector(g.kernel, xn, g.X);
    const Vector l = g.L.template triangularView<Eigen::Lower>().solve(kx);
    double lam2 = g.kernel.variance + g.jitter - l.squaredNorm();
    lam2 = std::max(lam2, floor);  // coincident fantasy point guard

    // k(x* + xi_s, x) for both frozen sample sets.
    Vector a_new(n_eff_), b_new(n_eff_);
    const Vector inv_l = g.kernel.lengthscales.cwiseInverse();
    for (Eigen::Index s = 0; s < n_eff_; ++s) {
      const Vector da =
          (xstar_n_ +
           rgp_->samples.E.row(s).transpose().cwiseQuotient(x_scale) - xn)
              .cwiseProduct(inv_l);
      const Vector db =
          (xstar_n_ +
           rgp_->samples.E2.row(s).transpose().cwiseQuotient(x_scale) - xn)
              .cwiseProduct(inv_l);
      a_new[s] = g.kernel.variance * std::exp(-0.5 * da.squaredNorm());
      b_new[s] = g.kernel.variance * std::exp(-0.5 * db.squaredNorm());
    }
    const Vector ahat = a_new - U_[i].transpose() * l;
    const Vector bhat = b_new - V_[i].transpose() * l;
    const double corr =
        ahat.dot(bhat) / (static_cast<double>(n_eff_) * lam2);
    const double num = std::max(num_var_[i], floor);
    const double den = std::max(num_var_[i] - corr, floor);
    alpha += 0.5 * (std::log(num) - std::log(den));
  }
  return std::max(alpha, 0.0);
}

Matrix halton_points(Eigen::Index count, Eigen::Index dim) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19,
                               23, 29, 31, 37, 41, 43, 47, 53};
  if (dim > static_cast<Eigen::Index>(std::size(primes)))
    throw std::invalid_argument("halton_points: dim too large");
  Matrix out(count, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const int base = primes[j];
    for (Eigen::Index i = 0; i < count; ++i) {
      double f = 1.0, r = 0.0;
      for (Eigen::Index n = i + 1; n > 0; n /= base) {
        f /= base;
        r += f * static_cast<double>(n % base);
      }
      out(i, j) = r;
    }
  }
  return out;
}

AcqOptResult optimize_acquisition(const BatchObjective& objective,
                                  const Vector& lo, const Vector& hi,
                                  const AcqOptBudget& budget,
                                  std::uint64_t seed) {
  const Eigen::Index dim = lo.size();
  RngStream rng(seed);
  Vector shift(dim);
  for (Eigen::Index j = 0; j < dim; ++j) shift[j] = rng.uniform();

  Matrix cand = halton_points(budget.raw, dim);
  for (Eigen::Index i = 0; i < cand.rows(); ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      double v = cand(i, j) + shift[j];
      if (v >= 1.0) v -= 1.0;
      cand(i, j) = lo[j] + (hi[j] - lo[j]) * v;
    }

  const Vector raw_vals = objective(cand);
  Eigen::Index best_raw = 0;
  raw_vals.maxCoeff(&best_raw);

  AcqOptResult res;
  res.x = cand.row(best_raw);
  res.value = raw_vals[best_raw];

  std::vector<Eigen::Index> order(cand.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return raw_vals[a] > raw_vals[b];
  });

  // Central-difference gradient of the (negated) objective; the stencil is
  // evaluated as one batch per call.
  const Vector h = 1e-6 * (hi - lo).cwiseMax(1e-12);
  const BoundedObjective neg = [&](const Vector& x, Vector& g) {
    Matrix pts(1 + 2 * dim, dim);
    pts.row(0) = x.transpose();
    for (Eigen::Index j = 0; j < dim; ++j) {
      pts.row(1 + 2 * j) = x.transpose();
      pts(1 + 2 * j, j) = std::min(x[j] + h[j], hi[j]);
      pts.row(2 + 2 * j) = x.transpose();
      pts(2 + 2 * j, j) = std::max(x[j] - h[j], lo[j]);
    }
    const Vector v = objective(pts);
    g.resize(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double dx = pts(1 + 2 * j, j) - pts(2 + 2 * j, j);
      g[j] = dx > 0.0 ? -(v[1 + 2 * j] - v[2 + 2 * j]) / dx : 0.0;
    }
    return -v[0];
  };

  LbfgsOptions lopts;
  lopts.max_iter = budget.refine_iters;
  lopts.grad_tol = 1e-8;
  lopts.value_only = [&](const Vector& x) {
    return -objective(x.transpose())[0];
  };
  int ok_starts = 0;
  const int n_starts =
      std::min<int>(budget.starts, static_cast<int>(cand.rows()));
  for (int s = 0; s < n_starts; ++s) {
    const LbfgsResult r =
        minimize_bounded(neg, cand.row(order[s]).transpose(), lo, hi, lopts);
    if (!std::isfinite(r.f)) continue;
    ++ok_starts;
    if (-r.f > res.value) {
      res.value = -r.f;
      res.x = r.x;
    }
  }
  res.all_starts_failed = (n_starts > 0 && ok_starts == 0);
  return res;
}

Vector al_relocate(const RobustGp& rgp, const Vector& x_star,
                   const Vector& dx_halfwidth, const DesignSpace& enlarged,
                   const AcqOptBudget& budget, std::uint64_t seed) {
  const Vector lo =
      (x_star - dx_halfwidth).cwiseMax(enlarged.lower);
  const Vector hi =
      (x_star + dx_halfwidth).cwiseMin(enlarged.upper);
  if (rgp.samples.all_zero())
    return x_star.cwiseMax(lo).cwiseMin(hi);  // J = f: self-sampling wins

  const AlScorer scorer(rgp, x_star);
  const BatchObjective obj = [&scorer](const Matrix& X) {
    Vector out(X.rows());
    for (Eigen::Index r = 0; r < X.rows(); ++r)
      out[r] = scorer.score(X.row(r).transpose());
    return out;
  };
  return optimize_acquisition(obj, lo, hi, budget, seed).x;
}

}  // namespace rmobo
