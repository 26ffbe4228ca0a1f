#include "rmobo/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace rmobo {

Matrix sample_noise(const NoiseDistribution& dist, Eigen::Index n,
                    RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_noise: n < 1");
  const Eigen::Index d = dist.dim();
  Matrix out(n, d);
  // Row-major fill so each draw vector is contiguous in generation order.
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      switch (dist.kind) {
        case NoiseKind::Gaussian:
          out(i, j) = dist.scale[j] == 0.0
                          ? dist.mean[j]
                          : rng.normal(dist.mean[j], dist.scale[j]);
          break;
        case NoiseKind::StudentT:
          out(i, j) = rng.student_t(dist.dof, dist.mean[j], dist.scale[j]);
          break;
        case NoiseKind::TruncatedNormal:
          out(i, j) = rng.truncated_normal(dist.mean[j], dist.scale[j],
                                           dist.lower[j], dist.upper[j]);
          break;
        case NoiseKind::Uniform:
          out(i, j) = rng.uniform(dist.lower[j], dist.upper[j]);
          break;
      }
    }
  }
  return out;
}

Vector evaluate_objectives(const Problem& problem, const Vector& x) {
  return problem.evaluate(x);
}

Matrix evaluate_objectives(const Problem& problem, const Matrix& X) {
  Matrix Y(X.rows(), problem.num_objectives);
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    Y.row(i) = problem.evaluate(X.row(i).transpose()).transpose();
  return Y;
}

Vector bayes_risk_oracle(const Problem& problem, const Vector& x,
                         Eigen::Index n_mc, RngStream& rng) {
  if (n_mc < 1) throw std::invalid_argument("bayes_risk_oracle: n_mc < 1");
  Vector acc = Vector::Zero(problem.num_objectives);
  for (Eigen::Index i = 0; i < n_mc; ++i) {
    Matrix xi = sample_noise(problem.noise, 1, rng);
    acc += problem.evaluate(x + xi.row(0).transpose());
  }
  return acc / static_cast<double>(n_mc);
}

Matrix bayes_risk_oracle_crn(const Problem& problem, const Matrix& X,
                             const Matrix& noise_draws) {
  Matrix acc = Matrix::Zero(X.rows(), problem.num_objectives);
  Vector shifted(X.cols());
  for (Eigen::Index k = 0; k < noise_draws.rows(); ++k) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      shifted = X.row(i).transpose() + noise_draws.row(k).transpose();
      acc.row(i) += problem.evaluate(shifted).transpose();
    }
  }
  return acc / static_cast<double>(noise_draws.rows());
}

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

// Raw table functions (minimization form); the registry negates them so the
// toolkit maximizes throughout. MDTP2/MDTP3 share the x1 scaling factor
// s(x1) = 1/(0.2+x1) + 10*x1^2.
double mdtp_scale(double x1) { return 1.0 / (0.2 + x1) + 10.0 * x1 * x1; }

double mdtp3_bimodal(double x2) {
  const double a = (x2 - 0.8) / 0.1;
  const double b = (x2 - 0.3) / 0.03;
  return 1.0 - 0.9 * std::exp(-a * a) - 1.3 * std::exp(-b * b);
}

double branin_raw(double x1, double x2) {
  const double inner =
      x2 - 5.1 * x1 * x1 / (4.0 * M_PI * M_PI) + 5.0 * x1 / M_PI - 6.0;
  return (inner * inner + 10.0 - 10.0 / (8.0 * M_PI) * std::cos(x1) - 44.81) /
         51.95;
}

double gmm_value(double x1, double x2) {
  struct Comp {
    double cx, cy, var, weight;
  };
  static const Comp comps[3] = {
      {0.2, 0.2, 0.2 * 0.2, 0.04 * M_PI},
      {0.8, 0.2, 0.1 * 0.1, 0.014 * M_PI},
      {0.5, 0.7, 0.1 * 0.1, 0.014 * M_PI},
  };
  double v = 0.0;
  for (const auto& c : comps) {
    const double d2 = (x1 - c.cx) * (x1 - c.cx) + (x2 - c.cy) * (x2 - c.cy);
    v += c.weight * std::exp(-d2 / (2.0 * c.var)) / (2.0 * M_PI * c.var);
  }
  return v;
}

}  // namespace

Problem make_problem(const std::string& name) {
  Problem p;
  p.name = name;
  p.num_objectives = 2;
  if (name == "sinlinforrester") {
    p.space = DesignSpace(Vector::Constant(1, 0.0), Vector::Constant(1, 1.0));
    p.noise = NoiseDistribution::gaussian(Vector::Zero(1),
                                          Vector::Constant(1, 0.05));
    p.al_box_halfwidth = Vector::Constant(1, 0.098);
    p.evaluate = [](const Vector& x) {
      const double t = x[0];
      const double y1 = std::sin(5.0 * M_PI * t * t) + 0.5 * t;
      const double y2 =
          (6.0 * t - 2.0) * (6.0 * t - 2.0) * std::sin(12.0 * t - 4.0);
      return vec2(-y1, -y2);
    };
  } else if (name == "vlmop2") {
    p.space = DesignSpace(Vector::Constant(2, -2.0), Vector::Constant(2, 2.0));
    p.noise = NoiseDistribution::student_t(200.0, Vector::Zero(2),
                                           Vector::Constant(2, 0.01));
    p.al_box_halfwidth = Vector::Constant(2, 0.0166);
    p.evaluate = [](const Vector& x) {
      const double s = 1.0 / std::sqrt(2.0);
      const double y1 =
          1.0 - std::exp(-((x[0] - s) * (x[0] - s) + (x[1] - s) * (x[1] - s)));
      const double y2 =
          1.0 - std::exp(-((x[0] + s) * (x[0] + s) + (x[1] + s) * (x[1] + s)));
      return vec2(-y1, -y2);
    };
  } else if (name == "mdtp2") {
    p.space = DesignSpace(vec2(0.0, -1.0), vec2(1.0, 1.0));
    p.noise = NoiseDistribution::truncated_normal(
        Vector::Zero(2), vec2(0.02, 0.04), Vector::Constant(2, -0.05),
        Vector::Constant(2, 0.05));
    p.al_box_halfwidth = Vector::Constant(2, 0.05);
    p.evaluate = [](const Vector& x) {
      const double g =
          10.0 + x[1] * x[1] - 10.0 * std::cos(4.0 * M_PI * x[1]);
      const double y2 = (1.0 - x[0] * x[0]) + g * mdtp_scale(x[0]);
      return vec2(-x[0], -y2);
    };
  } else if (name == "mdtp3") {
    p.space = DesignSpace(Vector::Zero(2), Vector::Ones(2));
    p.noise =
        NoiseDistribution::uniform(vec2(-0.02, -0.1), vec2(0.02, 0.1));
    p.al_box_halfwidth = vec2(0.02, 0.1);
    p.evaluate = [](const Vector& x) {
      const double y2 = mdtp3_bimodal(x[1]) * mdtp_scale(x[0]);
      return vec2(-x[0], -y2);
    };
  } else if (name == "braningmm") {
    p.space = DesignSpace(Vector::Zero(2), Vector::Ones(2));
    p.noise = NoiseDistribution::uniform(Vector::Constant(2, -0.2),
                                         Vector::Constant(2, 0.2));
    p.al_box_halfwidth = Vector::Constant(2, 0.02);
    p.evaluate = [](const Vector& x) {
      // The Gaussian-mixture objective is a maximization target as-is: its
      // sharp modes are the non-robust optima, the broad mode the robust one.
      return vec2(-branin_raw(x[0], x[1]), gmm_value(x[0], x[1]));
    };
  } else {
    throw std::invalid_argument("unknown problem: " + name);
  }
  return p;
}

std::vector<std::string> problem_names() {
  return {"vlmop2", "sinlinforrester", "mdtp2", "mdtp3", "braningmm"};
}

}  // namespace rmobo
