// First-stage acquisitions (exact EHVI for M=2, SAA qEHVI for batches), the
// second-stage active-learning acquisition with its activation rules, and
// the multi-start acquisition optimizer.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "rmobo/robust_gp.hpp"
#include "rmobo/types.hpp"

namespace rmobo {

double normal_pdf(double z);
double normal_cdf(double z);

// Posterior of the optimized quantity at candidate points; implementations
// wrap the robust GP (RMOBO) or the plain GPs (non-robust baseline).
class PosteriorProvider {
 public:
  virtual ~PosteriorProvider() = default;
  virtual int num_objectives() const = 0;
  // Independent marginals at each row of X (original units).
  virtual void diag(const Matrix& X, Matrix& mean, Matrix& var) const = 0;
  // Joint posterior over a batch: per-objective q x q covariance, PD.
  virtual void joint(const Matrix& Xq, Matrix& mean,
                     std::vector<Matrix>& cov) const = 0;
};

class RobustPosteriorProvider final : public PosteriorProvider {
 public:
  explicit RobustPosteriorProvider(const RobustGp& rgp, int n_threads = 1)
      : rgp_(&rgp), threads_(n_threads) {}
  int num_objectives() const override { return rgp_->num_objectives(); }
  void diag(const Matrix& X, Matrix& mean, Matrix& var) const override;
  void joint(const Matrix& Xq, Matrix& mean,
             std::vector<Matrix>& cov) const override;

 private:
  const RobustGp* rgp_;
  int threads_;
};

struct AcquisitionContext {
  const PosteriorProvider* posterior = nullptr;
  Matrix front;         // current best front (model-inferred, maximization)
  Vector ref;           // hypervolume reference point
  Matrix base_samples;  // n_base x (q * M) frozen standard normals (qEHVI)
};

// Reference point rule: per-objective front minimum minus 0.1x the front
// range (with a fallback width for degenerate single-point fronts).
Vector ehvi_reference(const Matrix& front);

// Exact expected hypervolume improvement for independent 2-d Gaussian
// marginals, by strip decomposition of the non-dominated region.
double ehvi_analytic(const Matrix& front, const Vector& ref, const Vector& mu,
                     const Vector& sd);

double ehvi(const AcquisitionContext& ctx, const Vector& x);

// SAA qEHVI over a batch (rows of Xq); deterministic given base samples.
double qehvi(const AcquisitionContext& ctx, const Matrix& Xq);

// Batch-of-candidates evaluator: rows are flattened q*d points.
using BatchObjective = std::function<Vector(const Matrix&)>;

BatchObjective make_acquisition_batch(const AcquisitionContext& ctx, int q,
                                      Eigen::Index dim);

// Activation: true iff x_star duplicates training data or sits at the
// design-space boundary within eps (normalized unit-cube coordinates).
bool al_activation(const Vector& x_star, const Matrix& X_train,
                   const DesignSpace& space, double eps);

// Half-log ratio of the J variance at x_star before/after fantasizing an
// observation at x into each base GP (rank-one update, value-independent).
class AlScorer {
 public:
  AlScorer(const RobustGp& rgp, const Vector& x_star);
  double score(const Vector& x) const;
  const Vector& numerator_var() const { return num_var_; }

 private:
  const RobustGp* rgp_;
  Vector xstar_n_;
  Vector num_var_;    // Var_J,i(x* | D), normalized output units
  Vector kbar_;       // (1/N) sum k(x*+xi_s, x*+xi'_s)
  std::vector<Matrix> U_, V_;  // L^{-1} K(x*+E, X)^T and the E2 twin
  Eigen::Index n_eff_ = 1;
};

struct AcqOptBudget {
  int raw = 1024;        // low-discrepancy candidate count (1024 * d default)
  int starts = 8;        // gradient-refined top candidates
  int refine_iters = 30;
};

struct AcqOptResult {
  Vector x;  // flattened q*d
  double value = 0.0;
  bool all_starts_failed = false;
};

// Halton candidates with a seeded Cranley-Patterson rotation, top-`starts`
// refined by bounded gradient ascent (central differences); the raw best is
// kept as incumbent so refinement can only improve the result.
AcqOptResult optimize_acquisition(const BatchObjective& objective,
                                  const Vector& lo, const Vector& hi,
                                  const AcqOptBudget& budget,
                                  std::uint64_t seed);

// Second-stage relocation: argmax of the AL acquisition over the box
// [x_star - dx, x_star + dx] clipped against the enlarged space. With
// identically-zero noise samples the argmax is x_star itself.
Vector al_relocate(const RobustGp& rgp, const Vector& x_star,
                   const Vector& dx_halfwidth, const DesignSpace& enlarged,
                   const AcqOptBudget& budget, std::uint64_t seed);

// Low-discrepancy Halton points in [0,1)^dim (1-based index start).
Matrix halton_points(Eigen::Index count, Eigen::Index dim);

}  // namespace rmobo
