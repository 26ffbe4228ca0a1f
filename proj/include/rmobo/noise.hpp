// Input-noise distributions: independent per dimension, additive on x.
#pragma once

#include <stdexcept>
#include <utility>

#include "rmobo/rng.hpp"
#include "rmobo/types.hpp"

namespace rmobo {

enum class NoiseKind { Gaussian, StudentT, TruncatedNormal, Uniform };

struct NoiseDistribution {
  NoiseKind kind = NoiseKind::Gaussian;
  Vector mean;   // Gaussian mean / StudentT loc / TruncatedNormal mean
  Vector scale;  // per-dim std (Gaussian, TruncatedNormal) or scale (StudentT)
  Vector lower;  // TruncatedNormal / Uniform
  Vector upper;
  double dof = 0.0;  // StudentT

  Eigen::Index dim() const {
    return kind == NoiseKind::Uniform ? lower.size() : mean.size();
  }

  static NoiseDistribution gaussian(Vector mean, Vector std) {
    // std == 0 is allowed as the degenerate delta limit (all-zero draws).
    for (Eigen::Index i = 0; i < std.size(); ++i)
      if (std[i] < 0.0) throw std::invalid_argument("gaussian: std < 0");
    NoiseDistribution d;
    d.kind = NoiseKind::Gaussian;
    d.mean = std::move(mean);
    d.scale = std::move(std);
    if (d.mean.size() != d.scale.size())
      throw std::invalid_argument("gaussian: size mismatch");
    return d;
  }

  static NoiseDistribution student_t(double dof, Vector loc, Vector scale) {
    if (dof <= 0.0) throw std::invalid_argument("student_t: dof <= 0");
    for (Eigen::Index i = 0; i < scale.size(); ++i)
      if (scale[i] <= 0.0) throw std::invalid_argument("student_t: scale <= 0");
    NoiseDistribution d;
    d.kind = NoiseKind::StudentT;
    d.dof = dof;
    d.mean = std::move(loc);
    d.scale = std::move(scale);
    if (d.mean.size() != d.scale.size())
      throw std::invalid_argument("student_t: size mismatch");
    return d;
  }

  static NoiseDistribution truncated_normal(Vector mean, Vector std, Vector lo,
                                            Vector up) {
    NoiseDistribution d;
    d.kind = NoiseKind::TruncatedNormal;
    d.mean = std::move(mean);
    d.scale = std::move(std);
    d.lower = std::move(lo);
    d.upper = std::move(up);
    const auto n = d.mean.size();
    if (d.scale.size() != n || d.lower.size() != n || d.upper.size() != n)
      throw std::invalid_argument("truncated_normal: size mismatch");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d.scale[i] <= 0.0)
        throw std::invalid_argument("truncated_normal: std <= 0");
      if (!(d.lower[i] < d.upper[i]))
        throw std::invalid_argument("truncated_normal: lower >= upper");
    }
    return d;
  }

  static NoiseDistribution uniform(Vector lo, Vector up) {
    NoiseDistribution d;
    d.kind = NoiseKind::Uniform;
    d.lower = std::move(lo);
    d.upper = std::move(up);
    if (d.lower.size() != d.upper.size())
      throw std::invalid_argument("uniform: size mismatch");
    for (Eigen::Index i = 0; i < d.lower.size(); ++i)
      if (!(d.lower[i] < d.upper[i]))
        throw std::invalid_argument("uniform: lower >= upper");
    return d;
  }

  // Delta distribution (no input uncertainty); used for degenerate-noise
  // checks and as the noise model of the non-robust baseline.
  static NoiseDistribution zero(Eigen::Index d) {
    return gaussian(Vector::Zero(d), Vector::Zero(d));
  }

  bool is_zero() const {
    return kind == NoiseKind::Gaussian && mean.isZero(0.0) &&
           scale.isZero(0.0);
  }
};

// n i.i.d. draws, one per row. Identical seed state => identical matrix.
Matrix sample_noise(const NoiseDistribution& dist, Eigen::Index n,
                    RngStream& rng);

}  // namespace rmobo
