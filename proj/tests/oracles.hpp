// Test-only oracles, independent of the library's implementation paths:
// Gauss-Hermite quadrature, rejection-MC hypervolume, brute-force dominance
// ranking.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "rmobo/pareto.hpp"
#include "rmobo/rng.hpp"
#include "rmobo/types.hpp"

namespace oracle {

using rmobo::Matrix;
using rmobo::Vector;

struct GaussHermite {
  Vector nodes;    // E[g(Z)] = sum_i weights[i] * g(nodes[i]), Z ~ N(0,1)
  Vector weights;
};

// Golub-Welsch on the probabilists'-Hermite Jacobi matrix.
inline GaussHermite gauss_hermite(int n) {
  Matrix J = Matrix::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  GaussHermite gh;
  gh.nodes = es.eigenvalues();
  gh.weights = es.eigenvectors().row(0).transpose().array().square();
  return gh;
}

// E[g(x + s .* Z)] for Z ~ N(0, I_d); tensor-product quadrature.
inline double expect_gaussian(const std::function<double(const Vector&)>& g,
                              const Vector& x, const Vector& s, int n = 60) {
  const GaussHermite gh = gauss_hermite(n);
  const Eigen::Index d = x.size();
  double acc = 0.0;
  if (d == 1) {
    for (int i = 0; i < n; ++i) {
      Vector p(1);
      p[0] = x[0] + s[0] * gh.nodes[i];
      acc += gh.weights[i] * g(p);
    }
  } else if (d == 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vector p(2);
        p << x[0] + s[0] * gh.nodes[i], x[1] + s[1] * gh.nodes[j];
        acc += gh.weights[i] * gh.weights[j] * g(p);
      }
  } else {
    throw std::invalid_argument("expect_gaussian: d > 2");
  }
  return acc;
}

// Rejection-MC estimate of the dominated area above ref (maximization).
inline double hypervolume_mc(const Matrix& front, const Vector& ref,
                             Eigen::Index n_points, rmobo::RngStream& rng) {
  Vector hi = front.colwise().maxCoeff();
  const double box =
      (hi[0] - ref[0]) * (hi[1] - ref[1]);
  if (box <= 0.0) return 0.0;
  Eigen::Index hits = 0;
  for (Eigen::Index k = 0; k < n_points; ++k) {
    const double u = ref[0] + (hi[0] - ref[0]) * rng.uniform();
    const double v = ref[1] + (hi[1] - ref[1]) * rng.uniform();
    for (Eigen::Index i = 0; i < front.rows(); ++i) {
      if (front(i, 0) > ref[0] && front(i, 1) > ref[1] && u <= front(i, 0) &&
          v <= front(i, 1)) {
        ++hits;
        break;
      }
    }
  }
  return box * static_cast<double>(hits) / static_cast<double>(n_points);
}

// Rank assignment by repeated peeling with pairwise dominance only.
inline std::vector<int> rank_by_peeling(const Matrix& Y) {
  const Eigen::Index n = Y.rows();
  std::vector<int> rank(n, -1);
  int r = 0;
  for (Eigen::Index assigned = 0; assigned < n; ++r) {
    std::vector<Eigen::Index> front;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (rank[i] >= 0) continue;
      bool dominated = false;
      for (Eigen::Index j = 0; j < n && !dominated; ++j)
        if (i != j && rank[j] < 0 && rmobo::dominates(Y.row(j), Y.row(i)))
          dominated = true;
      if (!dominated) front.push_back(i);
    }
    for (Eigen::Index i : front) rank[i] = r;
    assigned += static_cast<Eigen::Index>(front.size());
  }
  return rank;
}

// Random mutually non-dominated 2-d front of k points (maximization).
inline Matrix random_front(int k, rmobo::RngStream& rng, double scale = 1.0) {
  Matrix pts(k, 2);
  for (int i = 0; i < k; ++i) {
    const double t = (i + rng.uniform()) / k;
    pts(i, 0) = scale * std::cos(0.5 * M_PI * t);
    pts(i, 1) = scale * std::sin(0.5 * M_PI * t);
  }
  return rmobo::extract_front(pts).points;
}

}  // namespace oracle
