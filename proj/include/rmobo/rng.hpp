// Seeded random streams. Every consumer owns its own stream, derived from a
// master seed and a stream tag, so results are a pure function of the seed.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace rmobo {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Derives a child seed from (master, tag, k1, k2).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t k1 = 0, std::uint64_t k2 = 0) {
  std::uint64_t s = master;
  splitmix64(s);
  s ^= fnv1a(tag);
  splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (k1 + 1);
  splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (k2 + 1);
  return splitmix64(s);
}

// Random stream with explicit samplers. The samplers are implemented in
// terms of the uniform generator only, so a given seed always yields the
// same draws.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return (gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; keeps the spare draw.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  // Marsaglia-Tsang; shape >= 1 here (student-t needs shape = dof/2 with
  // dof well above 2 in practice).
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Location-scale student-t: loc + scale * Z / sqrt(chi2/dof).
  double student_t(double dof, double loc = 0.0, double scale = 1.0) {
    const double z = normal();
    const double chi2 = 2.0 * gamma(0.5 * dof);
    return loc + scale * z / std::sqrt(chi2 / dof);
  }

  // Rejection against the untruncated normal, bounded retry budget.
  double truncated_normal(double mean, double std, double lo, double hi,
                          int budget = 1000) {
    for (int i = 0; i < budget; ++i) {
      const double x = normal(mean, std);
      if (x >= lo && x <= hi) return x;
    }
    throw std::runtime_error(
        "truncated_normal: rejection budget exhausted; bounds are "
        "pathological for the given mean/std");
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmobo
