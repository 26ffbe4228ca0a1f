// Robust GP: Gaussian posterior over the Bayes risk J obtained by pushing
// the expectation over input noise through the base GP. Kernel expectations
// are either sample-average (frozen MC draws) or the closed form available
// for SE-ARD under Gaussian noise.
#pragma once

#include <cstdint>
#include <vector>

#include "rmobo/gp.hpp"
#include "rmobo/noise.hpp"
#include "rmobo/types.hpp"

namespace rmobo {

// Symmetrize and project onto the PSD cone (zero out negative eigenvalues),
// then add the smallest nugget eps_k = 1e-10 * 2^k * trace/m from a geometric
// ladder until Cholesky succeeds. Errors on non-finite entries.
Matrix nearest_pd(const Matrix& C);

// Noise draws frozen for a whole optimization run; E2 is the independent
// second set for the double expectation in the covariance.
struct FixedNoiseSamples {
  Matrix E;   // N x d, original units
  Matrix E2;  // N x d, independent of E
  std::uint64_t seed = 0;

  Eigen::Index count() const { return E.rows(); }
  bool all_zero() const { return E.isZero(0.0) && E2.isZero(0.0); }
};

FixedNoiseSamples draw_fixed_samples(const NoiseDistribution& noise,
                                     Eigen::Index n, std::uint64_t seed);

enum class KeMode { SaaMc, Analytic };

struct RobustGp {
  std::vector<GpModel> models;  // one per objective
  FixedNoiseSamples samples;
  KeMode ke_mode = KeMode::SaaMc;

  // Cached per-model quantities (normalized space).
  std::vector<Matrix> Kinv;
  std::vector<Matrix> train_scaled;    // (X - center) * diag(1/l)
  std::vector<Vector> train_sqnorm;
  std::vector<Matrix> e_scaled;        // E / x_scale * diag(1/l)
  std::vector<Matrix> e2_scaled;
  Vector noise_mean_unit;  // analytic mode (Gaussian noise only)
  Vector noise_std_unit;

  // Separable-kernel fast path: k(u+e, c) = k(u, c) * p(u, e) * q(c, e)
  // turns the MC sums into large GEMMs. Valid while the factor exponents
  // stay far from overflow; otherwise the direct per-sample path runs.
  std::vector<bool> fast_ok;
  std::vector<Matrix> Qe, Qe2;     // n x N: exp(c . e_i)
  std::vector<Matrix> Ccat;        // n x (n*N): blocks Kinv .* (q_i q2_i^T)
  std::vector<Matrix> Valpha;      // n x N: q_i .* alpha
  std::vector<double> kbar;        // (1/N) sum k(x+xi_i, x+xi'_i), any x
  std::vector<double> e_max_norm;  // max_i ||e_i|| over both sample sets

  int num_objectives() const { return static_cast<int>(models.size()); }
  Eigen::Index dim() const { return models.empty() ? 0 : models[0].X.cols(); }
};

// Build from fitted per-objective models and frozen samples. Analytic mode
// is only valid for Gaussian noise and errors otherwise.
RobustGp make_robust_gp(std::vector<GpModel> models,
                        const NoiseDistribution& noise,
                        FixedNoiseSamples samples,
                        KeMode mode = KeMode::SaaMc);

// Convenience: draws the samples internally (seed-derived streams).
RobustGp make_robust_gp(std::vector<GpModel> models,
                        const NoiseDistribution& noise, Eigen::Index n_samples,
                        std::uint64_t seed, KeMode mode = KeMode::SaaMc);

// Kernel expectation k_Jf between test points and the training set of one
// objective's model (normalized-kernel units; X_test in original units).
Matrix ke_cross(const RobustGp& rgp, int objective, const Matrix& X_test);

struct RobustPosterior {
  Matrix mean;  // m x M, original units
  Matrix var;   // m x M, clamped >= 0
};

struct RobustPosteriorFull {
  Matrix mean;              // m x M
  std::vector<Matrix> cov;  // M matrices of m x m, repaired by nearest_pd
};

// Diagonal posterior of J at test points (original units). The MC sum is
// split into fixed-size chunks reduced in index order, so any thread count
// gives identical results.
RobustPosterior robust_posterior(const RobustGp& rgp, const Matrix& X_test,
                                 int n_threads = 1);

RobustPosteriorFull robust_posterior_full(const RobustGp& rgp,
                                          const Matrix& X_test,
                                          int n_threads = 1);

// Posterior mean only (cheap path used for ranking candidate sets).
Matrix robust_mean(const RobustGp& rgp, const Matrix& X_test,
                   int n_threads = 1);

// Analytic spatial gradient of m_J for one objective at x (original units).
Vector robust_mean_grad(const RobustGp& rgp, int objective, const Vector& x);

}  // namespace rmobo
