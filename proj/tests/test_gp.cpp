#include <doctest.h>

#include <cmath>

#include "rmobo/gp.hpp"
#include "rmobo/rng.hpp"

using namespace rmobo;

namespace {

DesignSpace unit_space(int d) {
  return DesignSpace(Vector::Zero(d), Vector::Ones(d));
}

SeArdKernel kern(double var, std::initializer_list<double> ls) {
  SeArdKernel k;
  k.variance = var;
  k.lengthscales = Vector(ls.size());
  int i = 0;
  for (double l : ls) k.lengthscales[i++] = l;
  return k;
}

// Sample from the GP prior at X (normalized) with given kernel.
Vector gp_prior_draw(const SeArdKernel& k, const Matrix& X, RngStream& rng) {
  Matrix K = kernel_eval(k, X, X);
  K.diagonal().array() += 1e-10;
  const Matrix L = Eigen::LLT<Matrix>(K).matrixL();
  Vector z(X.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return L * z;
}

}  // namespace

TEST_CASE("kernel basics") {
  const auto k = kern(2.5, {0.4, 0.9});
  Matrix a(1, 2);
  a << 0.3, 0.7;
  CHECK(kernel_eval(k, a, a)(0, 0) == doctest::Approx(2.5).epsilon(1e-15));

  const auto k1 = kern(1.0, {1.0});
  Matrix p(1, 1), q(1, 1);
  p << 0.0;
  q << std::sqrt(2.0);
  CHECK(kernel_eval(k1, p, q)(0, 0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

  RngStream rng(2);
  Matrix A(4, 2), B(6, 2);
  for (int i = 0; i < 4; ++i) A.row(i) << rng.normal(), rng.normal();
  for (int i = 0; i < 6; ++i) B.row(i) << rng.normal(), rng.normal();
  const Matrix AB = kernel_eval(k, A, B);
  const Matrix BA = kernel_eval(k, B, A);
  CHECK((AB - BA.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("posterior interpolates noise-free data") {
  RngStream rng(4);
  Matrix X(12, 1);
  for (int i = 0; i < 12; ++i) X(i, 0) = rng.uniform();
  Vector y(12);
  for (int i = 0; i < 12; ++i) y[i] = std::sin(6.0 * X(i, 0));
  const GpModel gp = make_gp(X, y, unit_space(1), kern(1.0, {0.25}));
  Vector mean, var;
  gp.posterior(X, mean, var);
  const double jit_orig = gp.jitter * gp.norm.y_std * gp.norm.y_std;
  for (int i = 0; i < 12; ++i) {
    CHECK(std::abs(mean[i] - y[i]) < 1e-4);
    CHECK(var[i] <= 10.0 * jit_orig);
  }
}

TEST_CASE("posterior reverts to the prior far from data") {
  Matrix X(3, 1);
  X << 0.4, 0.45, 0.5;
  Vector y(3);
  y << 1.0, 2.0, 3.0;
  const GpModel gp = make_gp(X, y, unit_space(1), kern(1.3, {0.02}));
  Matrix far(1, 1);
  far << 0.9;  // 20+ lengthscales away
  Vector mean, var;
  gp.posterior(far, mean, var);
  CHECK(mean[0] == doctest::Approx(gp.norm.y_mean).epsilon(1e-9));
  CHECK(var[0] == doctest::Approx(1.3 * gp.norm.y_std * gp.norm.y_std)
                      .epsilon(1e-9));
}

TEST_CASE("full covariance is symmetric PSD and consistent with variances") {
  RngStream rng(6);
  Matrix X(10, 2);
  for (int i = 0; i < 10; ++i) X.row(i) << rng.uniform(), rng.uniform();
  Vector y(10);
  for (int i = 0; i < 10; ++i) y[i] = X(i, 0) * std::cos(4.0 * X(i, 1));
  const GpModel gp = make_gp(X, y, unit_space(2), kern(0.8, {0.3, 0.5}));

  Matrix T(5, 2);
  for (int i = 0; i < 5; ++i) T.row(i) << rng.uniform(), rng.uniform();
  Vector mean, var;
  Matrix cov;
  gp.posterior(T, mean, var);
  Vector mean2;
  gp.posterior_full(T, mean2, cov);
  CHECK((mean - mean2).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(cov(i, i) - var[i]) < 1e-10);
}

TEST_CASE("MAP gradient matches central finite differences") {
  RngStream rng(8);
  const int n = 14, d = 2;
  Matrix X(n, d);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    X.row(i) << rng.uniform(), rng.uniform();
    y[i] = std::sin(5.0 * X(i, 0)) + 0.3 * X(i, 1);
  }
  const double mu = y.mean();
  const double sd = std::sqrt((y.array() - mu).square().mean());
  const Vector ys = (y.array() - mu).matrix() / sd;
  const FitOptions opts;
  for (int rep = 0; rep < 20; ++rep) {
    Vector theta(d + 1);
    theta << 0.5 * rng.normal() - 1.0, 0.5 * rng.normal() - 1.0,
        0.4 * rng.normal();
    Vector grad;
    gp_map_neg_objective(X, ys, theta, opts, &grad);
    for (int j = 0; j <= d; ++j) {
      const double h = 1e-5;
      Vector tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      const double fp = gp_map_neg_objective(X, ys, tp, opts, nullptr);
      const double fm = gp_map_neg_objective(X, ys, tm, opts, nullptr);
      const double fd = (fp - fm) / (2.0 * h);
      CHECK(grad[j] ==
            doctest::Approx(fd).epsilon(1e-5).scale(std::abs(fd) + 1.0));
    }
  }
}

TEST_CASE("MAP fit recovers a known lengthscale within a factor of 2") {
  RngStream rng(10);
  const int n = 50;
  Matrix X(n, 1);
  for (int i = 0; i < n; ++i) X(i, 0) = rng.uniform();
  const auto truth = kern(1.0, {0.2});
  const Vector y = gp_prior_draw(truth, X, rng);
  RngStream fit_rng(11);
  const GpModel gp = fit_map(X, y, unit_space(1), FitOptions{}, fit_rng);
  CHECK(gp.kernel.lengthscales[0] > 0.1);
  CHECK(gp.kernel.lengthscales[0] < 0.4);
}

TEST_CASE("fit result is at least as good as every restart start point") {
  RngStream rng(12);
  const int n = 16;
  Matrix X(n, 1);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = rng.uniform();
    y[i] = std::cos(7.0 * X(i, 0));
  }
  const FitOptions opts;
  RngStream fit_rng(77);
  const GpModel gp = fit_map(X, y, unit_space(1), opts, fit_rng);
  const Vector ys = gp.y;
  Vector theta_opt(2);
  theta_opt << std::log(gp.kernel.lengthscales[0]),
      std::log(gp.kernel.variance);
  const double f_opt = gp_map_neg_objective(gp.X, ys, theta_opt, opts, nullptr);
  // Replay the restart initial points (same stream construction as fit_map).
  RngStream replay(77);
  for (int r = 0; r < opts.restarts; ++r) {
    Vector theta(2);
    if (r == 0) {
      theta << opts.prior_log_median, 0.0;
    } else {
      theta[0] = opts.prior_log_median + opts.prior_log_std * replay.normal();
      theta[1] = 0.5 * replay.normal();
    }
    const double f0 = gp_map_neg_objective(gp.X, ys, theta, opts, nullptr);
    CHECK(f_opt <= f0 + 1e-9);
  }
}

TEST_CASE("constant observations produce a constant posterior mean") {
  Matrix X(6, 1);
  X << 0.0, 0.2, 0.4, 0.6, 0.8, 1.0;
  const Vector y = Vector::Constant(6, 3.7);
  RngStream rng(14);
  const GpModel gp = fit_map(X, y, unit_space(1), FitOptions{}, rng);
  Matrix T(5, 1);
  T << 0.1, 0.3, 0.5, 0.7, 0.9;
  Vector mean, var;
  gp.posterior(T, mean, var);
  for (int i = 0; i < 5; ++i) CHECK(mean[i] == doctest::Approx(3.7).epsilon(1e-6));
}

TEST_CASE("conditioning on a new point never increases variance") {
  RngStream rng(16);
  Matrix X(8, 1);
  Vector y(8);
  for (int i = 0; i < 8; ++i) {
    X(i, 0) = rng.uniform();
    y[i] = std::sin(3.0 * X(i, 0));
  }
  const GpModel gp = make_gp(X, y, unit_space(1), kern(1.0, {0.3}));
  Vector xnew(1);
  xnew << 0.55;
  const GpModel gp2 = gp.condition_on(xnew, 0.31);
  Matrix T(40, 1);
  for (int i = 0; i < 40; ++i) T(i, 0) = i / 39.0;
  Vector m1, v1, m2, v2;
  gp.posterior(T, m1, v1);
  gp2.posterior(T, m2, v2);
  const double tol = 10.0 * gp.jitter * gp.norm.y_std * gp.norm.y_std;
  for (int i = 0; i < 40; ++i) CHECK(v2[i] <= v1[i] + tol);
}

TEST_CASE("fit input validation") {
  Matrix X(1, 1);
  X << 0.5;
  Vector y(1);
  y << 1.0;
  RngStream rng(1);
  CHECK_THROWS(fit_map(X, y, unit_space(1), FitOptions{}, rng));
  Matrix X2(3, 1);
  X2 << 0.1, 0.5, 0.9;
  Vector bad(3);
  bad << 1.0, std::nan(""), 2.0;
  CHECK_THROWS(fit_map(X2, bad, unit_space(1), FitOptions{}, rng));
}
