#include "rmobo/robust_gp.hpp"

#include <cmath>
#include <stdexcept>

#include "rmobo/parallel.hpp"
#include "rmobo/rng.hpp"

namespace rmobo {

namespace {
constexpr int kChunk = 256;          // MC samples per reduction chunk
constexpr double kMaxExponent = 300  // overflow guard for factorized kernels
    ;
constexpr Eigen::Index kMaxCcat = 25'000'000;  // doubles; ~200 MB cache cap
}  // namespace

Matrix nearest_pd(const Matrix& C) {
  if (C.rows() != C.cols()) throw std::invalid_argument("nearest_pd: square");
  if (!C.allFinite()) throw std::invalid_argument("nearest_pd: non-finite");
  const Eigen::Index m = C.rows();
  Matrix S = 0.5 * (C + C.transpose());
  {
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() == Eigen::Success) return S;  // already PD
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("nearest_pd: eigendecomposition failed");
  const Vector lam = es.eigenvalues().cwiseMax(0.0);
  Matrix P =
      es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  P = 0.5 * (P + P.transpose()).eval();

  double tr = S.trace();
  if (!(tr > 0.0)) tr = std::max(C.norm(), 1.0);
  const double base = 1e-10 * tr / static_cast<double>(m);
  for (int k = 0; k < 64; ++k) {
    const double eps = base * std::pow(2.0, k);
    Matrix trial = P;
    trial.diagonal().array() += eps;
    Eigen::LLT<Matrix> llt(trial);
    if (llt.info() == Eigen::Success) return trial;
  }
  throw std::runtime_error("nearest_pd: nugget ladder exhausted");
}

FixedNoiseSamples draw_fixed_samples(const NoiseDistribution& noise,
                                     Eigen::Index n, std::uint64_t seed) {
  FixedNoiseSamples s;
  s.seed = seed;
  RngStream r1(derive_seed(seed, "ke-E"));
  RngStream r2(derive_seed(seed, "ke-E2"));
  s.E = sample_noise(noise, n, r1);
  s.E2 = sample_noise(noise, n, r2);
  return s;
}

namespace {

Eigen::Index effective_count(const FixedNoiseSamples& s) {
  return s.all_zero() ? 1 : s.count();
}

}  // namespace

RobustGp make_robust_gp(std::vector<GpModel> models,
                        const NoiseDistribution& noise,
                        FixedNoiseSamples samples, KeMode mode) {
  if (models.empty()) throw std::invalid_argument("make_robust_gp: no models");
  if (mode == KeMode::Analytic && noise.kind != NoiseKind::Gaussian)
    throw std::invalid_argument(
        "make_robust_gp: analytic kernel expectation requires Gaussian noise");
  RobustGp rgp;
  rgp.samples = std::move(samples);
  rgp.ke_mode = mode;
  rgp.models = std::move(models);
  const Vector x_scale = rgp.models[0].norm.x_scale;
  if (mode == KeMode::Analytic) {
    rgp.noise_mean_unit = noise.mean.cwiseQuotient(x_scale);
    rgp.noise_std_unit = noise.scale.cwiseQuotient(x_scale);
  }
  const int M = rgp.num_objectives();
  const Eigen::Index N = effective_count(rgp.samples);
  rgp.Kinv.resize(M);
  rgp.train_scaled.resize(M);
  rgp.train_sqnorm.resize(M);
  rgp.e_scaled.resize(M);
  rgp.e2_scaled.resize(M);
  rgp.fast_ok.assign(M, false);
  rgp.Qe.resize(M);
  rgp.Qe2.resize(M);
  rgp.Ccat.resize(M);
  rgp.Valpha.resize(M);
  rgp.kbar.assign(M, 0.0);
  rgp.e_max_norm.assign(M, 0.0);
  for (int i = 0; i < M; ++i) {
    const GpModel& g = rgp.models[i];
    const Eigen::Index n = g.X.rows();
    rgp.Kinv[i] =
        g.L.triangularView<Eigen::Lower>().solve(Matrix::Identity(n, n));
    g.L.triangularView<Eigen::Lower>().transpose().solveInPlace(rgp.Kinv[i]);
    const Vector inv_l = g.kernel.lengthscales.cwiseInverse();
    // Center the unit cube so the factorized exponents stay small.
    rgp.train_scaled[i] =
        (g.X.rowwise() - Eigen::RowVectorXd::Constant(g.X.cols(), 0.5)) *
        inv_l.asDiagonal();
    rgp.train_sqnorm[i] = rgp.train_scaled[i].rowwise().squaredNorm();
    const Vector unit_scale = inv_l.cwiseQuotient(x_scale);  // orig -> scaled
    rgp.e_scaled[i] = rgp.samples.E.topRows(N) * unit_scale.asDiagonal();
    rgp.e2_scaled[i] = rgp.samples.E2.topRows(N) * unit_scale.asDiagonal();

    const double s2 = g.kernel.variance;
    rgp.kbar[i] =
        s2 *
        ((rgp.e_scaled[i] - rgp.e2_scaled[i]).rowwise().squaredNorm() * -0.5)
            .array()
            .exp()
            .mean();
    rgp.e_max_norm[i] =
        std::max(rgp.e_scaled[i].rowwise().norm().maxCoeff(),
                 rgp.e2_scaled[i].rowwise().norm().maxCoeff());

    // Train-side factors of the separable fast path.
    Matrix G1 = rgp.train_scaled[i] * rgp.e_scaled[i].transpose();   // n x N
    Matrix G2 = rgp.train_scaled[i] * rgp.e2_scaled[i].transpose();
    const double g_max =
        std::max(G1.size() ? G1.maxCoeff() : 0.0,
                 G2.size() ? G2.maxCoeff() : 0.0);
    if (g_max <= kMaxExponent) {
      rgp.fast_ok[i] = true;
      rgp.Qe[i] = G1.array().exp();
      rgp.Qe2[i] = G2.array().exp();
      rgp.Valpha[i] = rgp.Qe[i].array().colwise() * g.alpha.array();
      if (n * n * N <= kMaxCcat) {
        rgp.Ccat[i].resize(n, n * N);
        for (Eigen::Index s = 0; s < N; ++s)
          rgp.Ccat[i].middleCols(s * n, n) =
              rgp.Kinv[i].array() *
              (rgp.Qe[i].col(s) * rgp.Qe2[i].col(s).transpose()).array();
      }
    }
  }
  return rgp;
}

RobustGp make_robust_gp(std::vector<GpModel> models,
                        const NoiseDistribution& noise, Eigen::Index n_samples,
                        std::uint64_t seed, KeMode mode) {
  return make_robust_gp(std::move(models), noise,
                        draw_fixed_samples(noise, n_samples, seed), mode);
}

namespace {

Matrix scaled_test(const RobustGp& rgp, int obj, const Matrix& X_test) {
  const GpModel& g = rgp.models[obj];
  return (g.norm.to_unit_rows(X_test).rowwise() -
          Eigen::RowVectorXd::Constant(X_test.cols(), 0.5)) *
         g.kernel.lengthscales.cwiseInverse().asDiagonal();
}

// A0[r, t] = variance * exp(-0.5 ||u_r - c_t||^2) on pre-scaled coordinates.
Matrix base_cross(const Matrix& u, const Matrix& c, const Vector& c_sqnorm,
                  double variance) {
  Matrix A = u * c.transpose();
  A *= -2.0;
  A.colwise() += u.rowwise().squaredNorm();
  A.rowwise() += c_sqnorm.transpose();
  return ((A.array().max(0.0) * -0.5).exp() * variance).matrix();
}

struct SaaAccum {
  Vector mean, quad;
  Matrix cov;
};

enum class Want { MeanOnly, Diag, Full };

// Direct per-sample path; always valid, used when the factorized exponents
// could overflow or the cache is too large.
void saa_chunk_direct(const RobustGp& rgp, int obj, const Matrix& Xts,
                      Eigen::Index i_begin, Eigen::Index i_end, Want want,
                      SaaAccum& acc) {
  const GpModel& g = rgp.models[obj];
  const double s2 = g.kernel.variance;
  const Matrix& Ts = rgp.train_scaled[obj];
  const Vector& tn2 = rgp.train_sqnorm[obj];
  const Eigen::Index m = Xts.rows();
  const Eigen::Index n = Ts.rows();

  acc.mean = Vector::Zero(m);
  if (want != Want::MeanOnly) acc.quad = Vector::Zero(m);
  if (want == Want::Full) acc.cov = Matrix::Zero(m, m);

  Matrix As(m, Xts.cols()), Bs(m, Xts.cols());
  Matrix A(m, n), B(m, n), T(m, n), Kx;
  for (Eigen::Index i = i_begin; i < i_end; ++i) {
    As = Xts;
    As.rowwise() += rgp.e_scaled[obj].row(i);
    A = base_cross(As, Ts, tn2, s2);
    acc.mean.noalias() += A * g.alpha;
    if (want == Want::MeanOnly) continue;

    Bs = Xts;
    Bs.rowwise() += rgp.e2_scaled[obj].row(i);
    B = base_cross(Bs, Ts, tn2, s2);
    T.noalias() = A * rgp.Kinv[obj];
    if (want == Want::Diag) {
      acc.quad += (T.array() * B.array()).rowwise().sum().matrix();
    } else {
      Kx.noalias() = As * Bs.transpose();
      Kx *= -2.0;
      Kx.colwise() += As.rowwise().squaredNorm();
      Kx.rowwise() += Bs.rowwise().squaredNorm().transpose();
      acc.cov += ((Kx.array().max(0.0) * -0.5).exp() * s2).matrix();
      acc.cov.noalias() -= T * B.transpose();
    }
  }
}

// Factorized path: one base kernel matrix modulated by rank-one sample
// factors; the quadratic terms reduce to one GEMM per chunk.
struct FastCtx {
  Matrix A0;      // m x n
  Matrix P, P2;   // m x N
  Matrix W;       // m x N (mean path)
};

void saa_chunk_fast(const RobustGp& rgp, int obj, const FastCtx& ctx,
                    Eigen::Index i_begin, Eigen::Index i_end, Want want,
                    SaaAccum& acc) {
  const Eigen::Index m = ctx.A0.rows();
  const Eigen::Index n = ctx.A0.cols();
  const Eigen::Index len = i_end - i_begin;
  acc.mean = (ctx.P.middleCols(i_begin, len).array() *
              ctx.W.middleCols(i_begin, len).array())
                 .rowwise()
                 .sum();
  if (want == Want::MeanOnly) return;
  acc.quad = Vector::Zero(m);
  if (m >= 64 && rgp.Ccat[obj].size() > 0) {
    // Blocked GEMM against the cached per-sample matrices; block size keeps
    // the product slab cache-resident.
    constexpr Eigen::Index kBlock = 16;
    Matrix U(m, kBlock * n);
    for (Eigen::Index b = i_begin; b < i_end; b += kBlock) {
      const Eigen::Index blk = std::min(kBlock, i_end - b);
      U.leftCols(blk * n).noalias() =
          ctx.A0 * rgp.Ccat[obj].middleCols(b * n, blk * n);
      for (Eigen::Index k = 0; k < blk; ++k) {
        acc.quad.array() +=
            ctx.P.col(b + k).array() * ctx.P2.col(b + k).array() *
            (U.middleCols(k * n, n).array() * ctx.A0.array()).rowwise().sum();
      }
    }
  } else {
    // Few test points: one n x n quadratic-form matrix per test row, then a
    // single GEMM across the chunk's samples.
    Matrix Mr(n, n), Z(n, len);
    for (Eigen::Index r = 0; r < m; ++r) {
      Mr = rgp.Kinv[obj].array() *
           (ctx.A0.row(r).transpose() * ctx.A0.row(r)).array();
      Z.noalias() = Mr * rgp.Qe2[obj].middleCols(i_begin, len);
      const Vector diag =
          (rgp.Qe[obj].middleCols(i_begin, len).array() * Z.array())
              .colwise()
              .sum();
      acc.quad[r] = (ctx.P.row(r).segment(i_begin, len).array() *
                     ctx.P2.row(r).segment(i_begin, len).array() *
                     diag.transpose().array())
                        .sum();
    }
  }
}

void saa_reduce(const RobustGp& rgp, int obj, const Matrix& Xts, Want want,
                int n_threads, SaaAccum& total) {
  const Eigen::Index N = effective_count(rgp.samples);
  const Eigen::Index n = rgp.train_scaled[obj].rows();
  const GpModel& g = rgp.models[obj];

  bool fast = rgp.fast_ok[obj] && want != Want::Full;
  FastCtx ctx;
  if (fast) {
    const double u_max =
        Xts.rows() ? Xts.rowwise().norm().maxCoeff() : 0.0;
    const double e_max = rgp.e_max_norm[obj];
    if (u_max * e_max + 0.5 * e_max * e_max > kMaxExponent) fast = false;
  }
  if (fast) {
    ctx.A0 = base_cross(Xts, rgp.train_scaled[obj], rgp.train_sqnorm[obj],
                        g.kernel.variance);
    Matrix G = -(Xts * rgp.e_scaled[obj].transpose());
    G.rowwise() -=
        (0.5 * rgp.e_scaled[obj].rowwise().squaredNorm()).transpose();
    ctx.P = G.array().exp();
    G = -(Xts * rgp.e2_scaled[obj].transpose());
    G.rowwise() -=
        (0.5 * rgp.e2_scaled[obj].rowwise().squaredNorm()).transpose();
    ctx.P2 = G.array().exp();
    ctx.W.noalias() = ctx.A0 * rgp.Valpha[obj];
  }

  const int n_chunks = static_cast<int>((N + kChunk - 1) / kChunk);
  std::vector<SaaAccum> parts(n_chunks);
  parallel_chunks(n_chunks, n_threads, [&](int c) {
    const Eigen::Index b = static_cast<Eigen::Index>(c) * kChunk;
    const Eigen::Index e = std::min<Eigen::Index>(b + kChunk, N);
    if (fast)
      saa_chunk_fast(rgp, obj, ctx, b, e, want, parts[c]);
    else
      saa_chunk_direct(rgp, obj, Xts, b, e, want, parts[c]);
  });
  total = std::move(parts[0]);
  for (int c = 1; c < n_chunks; ++c) {
    total.mean += parts[c].mean;
    if (want != Want::MeanOnly) total.quad += parts[c].quad;
    if (want == Want::Full) total.cov += parts[c].cov;
  }
  const double inv = 1.0 / static_cast<double>(N);
  total.mean *= inv;
  if (want != Want::MeanOnly) total.quad *= inv;
  if (want == Want::Full) total.cov *= inv;
}

// SE kernel with per-dimension lengthscale^2 inflated by the noise variance
// and amplitude rescaled accordingly (closed-form kernel expectation for
// SE-ARD under Gaussian noise; the variance inflation doubles for the
// double expectation).
SeArdKernel inflate_kernel(const SeArdKernel& k, const Vector& noise_std,
                           double factor) {
  SeArdKernel out;
  const Vector l2 = k.lengthscales.array().square();
  const Vector infl = l2.array() + factor * noise_std.array().square();
  out.lengthscales = infl.array().sqrt();
  out.variance = k.variance * std::sqrt((l2.array() / infl.array()).prod());
  return out;
}

}  // namespace

Matrix ke_cross(const RobustGp& rgp, int objective, const Matrix& X_test) {
  const GpModel& g = rgp.models[objective];
  if (rgp.ke_mode == KeMode::Analytic) {
    const SeArdKernel kc = inflate_kernel(g.kernel, rgp.noise_std_unit, 1.0);
    Matrix Xshift = g.norm.to_unit_rows(X_test);
    Xshift.rowwise() += rgp.noise_mean_unit.transpose();
    return kernel_eval(kc, Xshift, g.X);
  }
  // (1/N) sum_i k_f(x + xi_i, X_train) over the frozen draw set.
  const Matrix Xts = scaled_test(rgp, objective, X_test);
  const Matrix& Ts = rgp.train_scaled[objective];
  const Vector& tn2 = rgp.train_sqnorm[objective];
  const Eigen::Index N = effective_count(rgp.samples);
  Matrix acc = Matrix::Zero(Xts.rows(), Ts.rows());
  Matrix As(Xts.rows(), Xts.cols());
  for (Eigen::Index i = 0; i < N; ++i) {
    As = Xts;
    As.rowwise() += rgp.e_scaled[objective].row(i);
    acc += base_cross(As, Ts, tn2, g.kernel.variance);
  }
  return acc / static_cast<double>(N);
}

RobustPosterior robust_posterior(const RobustGp& rgp, const Matrix& X_test,
                                 int n_threads) {
  const int M = rgp.num_objectives();
  RobustPosterior post;
  post.mean.resize(X_test.rows(), M);
  post.var.resize(X_test.rows(), M);
  for (int i = 0; i < M; ++i) {
    const GpModel& g = rgp.models[i];
    Vector mean_u, var_u;
    if (rgp.ke_mode == KeMode::Analytic) {
      const Matrix Kc = ke_cross(rgp, i, X_test);
      const SeArdKernel kd = inflate_kernel(g.kernel, rgp.noise_std_unit, 2.0);
      const Matrix V =
          g.L.triangularView<Eigen::Lower>().solve(Kc.transpose());
      mean_u = Kc * g.alpha;
      var_u = (kd.variance - V.colwise().squaredNorm().array())
                  .max(0.0)
                  .matrix()
                  .transpose();
    } else {
      SaaAccum acc;
      saa_reduce(rgp, i, scaled_test(rgp, i, X_test), Want::Diag, n_threads,
                 acc);
      mean_u = acc.mean;
      var_u = (rgp.kbar[i] - acc.quad.array()).max(0.0).matrix();
    }
    post.mean.col(i) = (mean_u.array() * g.norm.y_std + g.norm.y_mean).matrix();
    post.var.col(i) = var_u * (g.norm.y_std * g.norm.y_std);
  }
  return post;
}

RobustPosteriorFull robust_posterior_full(const RobustGp& rgp,
                                          const Matrix& X_test,
                                          int n_threads) {
  const int M = rgp.num_objectives();
  RobustPosteriorFull post;
  post.mean.resize(X_test.rows(), M);
  post.cov.resize(M);
  for (int i = 0; i < M; ++i) {
    const GpModel& g = rgp.models[i];
    Vector mean_u;
    Matrix cov_u;
    if (rgp.ke_mode == KeMode::Analytic) {
      const Matrix Kc = ke_cross(rgp, i, X_test);
      const SeArdKernel kd = inflate_kernel(g.kernel, rgp.noise_std_unit, 2.0);
      const Matrix Xn = g.norm.to_unit_rows(X_test);
      const Matrix V =
          g.L.triangularView<Eigen::Lower>().solve(Kc.transpose());
      mean_u = Kc * g.alpha;
      cov_u = kernel_eval(kd, Xn, Xn);
      cov_u.noalias() -= V.transpose() * V;
    } else {
      SaaAccum acc;
      saa_reduce(rgp, i, scaled_test(rgp, i, X_test), Want::Full, n_threads,
                 acc);
      mean_u = acc.mean;
      cov_u = std::move(acc.cov);
    }
    post.mean.col(i) = (mean_u.array() * g.norm.y_std + g.norm.y_mean).matrix();
    post.cov[i] = nearest_pd(cov_u) * (g.norm.y_std * g.norm.y_std);
  }
  return post;
}

Matrix robust_mean(const RobustGp& rgp, const Matrix& X_test, int n_threads) {
  const int M = rgp.num_objectives();
  Matrix mean(X_test.rows(), M);
  for (int i = 0; i < M; ++i) {
    const GpModel& g = rgp.models[i];
    Vector mean_u;
    if (rgp.ke_mode == KeMode::Analytic) {
      mean_u = ke_cross(rgp, i, X_test) * g.alpha;
    } else {
      SaaAccum acc;
      saa_reduce(rgp, i, scaled_test(rgp, i, X_test), Want::MeanOnly,
                 n_threads, acc);
      mean_u = acc.mean;
    }
    mean.col(i) = (mean_u.array() * g.norm.y_std + g.norm.y_mean).matrix();
  }
  return mean;
}

Vector robust_mean_grad(const RobustGp& rgp, int objective, const Vector& x) {
  const GpModel& g = rgp.models[objective];
  const Vector xn = g.norm.to_unit(x);
  Vector grad_u = Vector::Zero(x.size());
  if (rgp.ke_mode == KeMode::Analytic) {
    const SeArdKernel kc = inflate_kernel(g.kernel, rgp.noise_std_unit, 1.0);
    grad_u = kernel_vector_grad(kc, xn + rgp.noise_mean_unit, g.X).transpose() *
             g.alpha;
  } else {
    const Vector x_scale = g.norm.x_scale;
    const Eigen::Index N = effective_count(rgp.samples);
    for (Eigen::Index i = 0; i < N; ++i) {
      const Vector xi =
          rgp.samples.E.row(i).transpose().cwiseQuotient(x_scale);
      grad_u +=
          kernel_vector_grad(g.kernel, xn + xi, g.X).transpose() * g.alpha;
    }
    grad_u /= static_cast<double>(N);
  }
  // d(original-unit mean)/d(original-unit x)
  return (grad_u.array() * g.norm.y_std / g.norm.x_scale.array()).matrix();
}

}  // namespace rmobo
