#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rmobo/problem.hpp"

using namespace rmobo;

namespace {
Vector vec(double a) {
  Vector v(1);
  v << a;
  return v;
}
Vector vec(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("sample_noise is a pure function of the seed") {
  const auto dist = NoiseDistribution::gaussian(Vector::Zero(2), vec(0.1, 0.2));
  RngStream a(42), b(42), c(43);
  const Matrix xa = sample_noise(dist, 50, a);
  const Matrix xb = sample_noise(dist, 50, b);
  const Matrix xc = sample_noise(dist, 50, c);
  CHECK((xa - xb).cwiseAbs().maxCoeff() == 0.0);  // bit-exact
  CHECK((xa - xc).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("uniform sample mean is centered") {
  const auto dist =
      NoiseDistribution::uniform(vec(-0.2, -0.2), vec(0.2, 0.2));
  RngStream rng(7);
  const Matrix xs = sample_noise(dist, 100000, rng);
  const double sd = 0.4 / std::sqrt(12.0);
  const double bound = 3.0 * sd / std::sqrt(100000.0);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(xs.col(j).mean()) < bound);
}

TEST_CASE("gaussian sample std within 2 percent at n = 1e5") {
  const auto dist = NoiseDistribution::gaussian(Vector::Zero(1), vec(0.05));
  RngStream rng(11);
  const Matrix xs = sample_noise(dist, 100000, rng);
  const double sd = std::sqrt(xs.col(0).array().square().mean());
  CHECK(sd == doctest::Approx(0.05).epsilon(0.02));
}

TEST_CASE("truncated normal respects the MDTP2 bounds") {
  const auto dist = NoiseDistribution::truncated_normal(
      Vector::Zero(2), vec(0.02, 0.04), vec(-0.05, -0.05), vec(0.05, 0.05));
  RngStream rng(3);
  const Matrix xs = sample_noise(dist, 10000, rng);
  CHECK(xs.minCoeff() >= -0.05);
  CHECK(xs.maxCoeff() <= 0.05);
}

TEST_CASE("truncated normal rejection budget errors on pathological bounds") {
  const auto dist = NoiseDistribution::truncated_normal(
      Vector::Zero(1), vec(1.0), vec(50.0), vec(50.001));
  RngStream rng(1);
  CHECK_THROWS(sample_noise(dist, 1, rng));
}

TEST_CASE("distribution parameter validation") {
  CHECK_THROWS(NoiseDistribution::student_t(0.0, Vector::Zero(1), vec(1.0)));
  CHECK_THROWS(NoiseDistribution::student_t(5.0, Vector::Zero(1), vec(0.0)));
  CHECK_THROWS(NoiseDistribution::uniform(vec(1.0), vec(1.0)));
  CHECK_THROWS(NoiseDistribution::truncated_normal(Vector::Zero(1), vec(1.0),
                                                   vec(2.0), vec(1.0)));
  CHECK_NOTHROW(NoiseDistribution::gaussian(Vector::Zero(1), vec(0.0)));
}

TEST_CASE("VLMOP2 values at the first objective's center") {
  const Problem p = make_problem("vlmop2");
  const double s = 1.0 / std::sqrt(2.0);
  const Vector y = evaluate_objectives(p, vec(s, s));
  CHECK(std::abs(y[0]) < 1e-15);  // raw y1 = 0
  CHECK(y[1] ==
        doctest::Approx(-(1.0 - std::exp(-4.0))).epsilon(1e-12));
}

TEST_CASE("Forrester objective value at zero") {
  const Problem p = make_problem("sinlinforrester");
  const Vector y = evaluate_objectives(p, vec(0.0));
  CHECK(y[1] == doctest::Approx(-4.0 * std::sin(-4.0)).epsilon(1e-14));
  CHECK(y[1] == doctest::Approx(-3.0272099812317128).epsilon(1e-12));
}

TEST_CASE("BraninGMM second objective is the mixture value") {
  const Problem p = make_problem("braningmm");
  RngStream rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vector x = vec(rng.uniform(), rng.uniform());
    double expect = 0.0;
    const double cx[3] = {0.2, 0.8, 0.5}, cy[3] = {0.2, 0.2, 0.7};
    const double var[3] = {0.04, 0.01, 0.01};
    const double w[3] = {0.04 * M_PI, 0.014 * M_PI, 0.014 * M_PI};
    for (int j = 0; j < 3; ++j) {
      const double d2 = (x[0] - cx[j]) * (x[0] - cx[j]) +
                        (x[1] - cy[j]) * (x[1] - cy[j]);
      expect += w[j] / (2.0 * M_PI * var[j]) * std::exp(-d2 / (2.0 * var[j]));
    }
    CHECK(evaluate_objectives(p, x)[1] ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("registry exposes exactly the five benchmarks with Table settings") {
  const auto names = problem_names();
  CHECK(names == std::vector<std::string>{"vlmop2", "sinlinforrester",
                                          "mdtp2", "mdtp3", "braningmm"});
  for (const auto& n : names) {
    const Problem p = make_problem(n);
    CHECK(p.num_objectives == 2);
    CHECK(p.al_box_halfwidth.size() == p.space.dim());
  }
  const Problem v = make_problem("vlmop2");
  CHECK(v.noise.kind == NoiseKind::StudentT);
  CHECK(v.noise.dof == 200.0);
  CHECK(v.noise.scale[0] == 0.01);
  CHECK(v.al_box_halfwidth[0] == 0.0166);
  const Problem m3 = make_problem("mdtp3");
  CHECK(m3.noise.kind == NoiseKind::Uniform);
  CHECK(m3.noise.lower[1] == -0.1);
  CHECK(m3.al_box_halfwidth[1] == 0.1);
  const Problem slf = make_problem("sinlinforrester");
  CHECK(slf.noise.scale[0] == 0.05);
  CHECK(slf.al_box_halfwidth[0] == 0.098);
  CHECK_THROWS(make_problem("nope"));
}

TEST_CASE("objectives are finite on the enlarged space") {
  for (const auto& name : problem_names()) {
    const Problem p = make_problem(name);
    const DesignSpace big = p.enlarged_space();
    const Eigen::Index d = big.dim();
    const int res = d == 1 ? 401 : 41;
    if (d == 1) {
      for (int i = 0; i < res; ++i) {
        const Vector x =
            big.lower + big.range() * (static_cast<double>(i) / (res - 1));
        CHECK(evaluate_objectives(p, x).allFinite());
      }
    } else {
      for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j) {
          Vector x(2);
          x << big.lower[0] + big.range()[0] * i / (res - 1.0),
              big.lower[1] + big.range()[1] * j / (res - 1.0);
          CHECK(evaluate_objectives(p, x).allFinite());
        }
    }
  }
}

TEST_CASE("bayes risk oracle equals the objective under zero noise") {
  Problem p = make_problem("mdtp2");
  p.noise = NoiseDistribution::zero(2);
  RngStream rng(9);
  const Vector x = vec(0.4, 0.2);
  const Vector j = bayes_risk_oracle(p, x, 100, rng);
  CHECK((j - evaluate_objectives(p, x)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bayes risk of a linear objective is the objective") {
  Problem p;
  p.name = "linear";
  p.space = DesignSpace(vec(0.0), vec(1.0));
  p.num_objectives = 2;
  p.noise = NoiseDistribution::gaussian(Vector::Zero(1), vec(0.1));
  p.al_box_halfwidth = vec(0.2);
  p.evaluate = [](const Vector& x) {
    Vector y(2);
    y << x[0], -2.0 * x[0];
    return y;
  };
  RngStream rng(13);
  const Vector j = bayes_risk_oracle(p, vec(0.5), 200000, rng);
  const double se = 0.1 / std::sqrt(200000.0);
  CHECK(std::abs(j[0] - 0.5) < 4.0 * se);
  CHECK(std::abs(j[1] + 1.0) < 8.0 * se);
}

TEST_CASE("SinLin Bayes risk matches Gauss-Hermite quadrature") {
  const Problem p = make_problem("sinlinforrester");
  const double quad = oracle::expect_gaussian(
      [&](const Vector& x) { return evaluate_objectives(p, x)[0]; }, vec(0.5),
      vec(0.05), 80);
  RngStream rng(3);
  const Vector mc = bayes_risk_oracle(p, vec(0.5), 1000000, rng);
  CHECK(quad == doctest::Approx(0.2774205084301691).epsilon(1e-9));
  CHECK(std::abs(mc[0] - quad) < 1e-3);  // agreement to 3 decimal places
}

TEST_CASE("bayes risk oracle is stable under doubling n_mc") {
  const Problem p = make_problem("sinlinforrester");
  const Vector x = vec(0.37);
  // Per-objective standard errors from the draws themselves.
  RngStream se_rng(21);
  const Matrix draws = sample_noise(p.noise, 20000, se_rng);
  Matrix vals(draws.rows(), 2);
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    const Vector shifted = x + draws.row(i).transpose();
    vals.row(i) = evaluate_objectives(p, shifted).transpose();
  }
  const Vector sd =
      ((vals.rowwise() - vals.colwise().mean()).array().square().colwise()
           .mean())
          .sqrt();
  RngStream r1(31), r2(32);
  const Vector a = bayes_risk_oracle(p, x, 100000, r1);
  const Vector b = bayes_risk_oracle(p, x, 200000, r2);
  for (int j = 0; j < 2; ++j) {
    const double combined = std::hypot(sd[j] / std::sqrt(100000.0),
                                       sd[j] / std::sqrt(200000.0));
    CHECK(std::abs(a[j] - b[j]) < 3.0 * combined);
  }
}

TEST_CASE("crn oracle matches the sequential oracle in expectation") {
  const Problem p = make_problem("braningmm");
  RngStream rng(17);
  const Matrix draws = sample_noise(p.noise, 50000, rng);
  Matrix X(2, 2);
  X << 0.2, 0.2, 0.7, 0.6;
  const Matrix J = bayes_risk_oracle_crn(p, X, draws);
  RngStream rng2(18);
  const Vector j0 = bayes_risk_oracle(p, X.row(0).transpose(), 50000, rng2);
  CHECK(std::abs(J(0, 1) - j0[1]) < 0.01);
}
