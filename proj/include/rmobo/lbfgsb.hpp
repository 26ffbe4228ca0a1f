// Compact projected L-BFGS for box-bounded smooth problems: limited-memory
// two-loop direction, projection onto the box, Armijo backtracking.
#pragma once

#include <cmath>
#include <deque>
#include <functional>
#include <limits>

#include "rmobo/types.hpp"

namespace rmobo {

// Returns f(x) and fills grad; may return +inf to signal an infeasible
// point (e.g. a failed factorization), which the line search backs away from.
using BoundedObjective = std::function<double(const Vector&, Vector&)>;

struct LbfgsOptions {
  int max_iter = 100;
  int memory = 8;
  double grad_tol = 1e-7;
  double step_tol = 1e-12;
  // Optional cheap value-only evaluation for line-search trials (useful
  // when gradients come from finite differences).
  std::function<double(const Vector&)> value_only;
};

struct LbfgsResult {
  Vector x;
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;  // false also when the initial point is infeasible
};

inline LbfgsResult minimize_bounded(const BoundedObjective& fn, Vector x,
                                    const Vector& lo, const Vector& hi,
                                    const LbfgsOptions& opts = {}) {
  const auto clip = [&](Vector v) {
    return v.cwiseMax(lo).cwiseMin(hi);
  };
  x = clip(std::move(x));
  const Eigen::Index n = x.size();
  Vector g(n), g_new(n);
  LbfgsResult res;
  double f = fn(x, g);
  if (!std::isfinite(f) || !g.allFinite()) {
    res.x = x;
    return res;
  }

  std::deque<std::pair<Vector, Vector>> mem;  // (s, y) pairs
  Vector q(n), dir(n);
  for (int it = 0; it < opts.max_iter; ++it) {
    // Projected-gradient stationarity measure.
    const double pg = (x - clip(x - g)).cwiseAbs().maxCoeff();
    if (pg < opts.grad_tol) {
      res.converged = true;
      break;
    }

    // Two-loop recursion.
    q = g;
    std::vector<double> a(mem.size());
    for (int i = static_cast<int>(mem.size()) - 1; i >= 0; --i) {
      const auto& [s, y] = mem[i];
      const double rho = 1.0 / s.dot(y);
      a[i] = rho * s.dot(q);
      q -= a[i] * y;
    }
    if (!mem.empty()) {
      const auto& [s, y] = mem.back();
      q *= s.dot(y) / y.squaredNorm();
    }
    for (size_t i = 0; i < mem.size(); ++i) {
      const auto& [s, y] = mem[i];
      const double rho = 1.0 / s.dot(y);
      q += (a[i] - rho * y.dot(q)) * s;
    }
    dir = -q;
    if (dir.dot(g) > -1e-16 * dir.norm() * g.norm()) {
      mem.clear();  // not a descent direction, fall back to steepest descent
      dir = -g;
    }

    // Backtracking along the projected path.
    double t = 1.0;
    bool accepted = false;
    Vector x_new;
    double f_new = f;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = clip(x + t * dir);
      const Vector step = x_new - x;
      if (step.cwiseAbs().maxCoeff() < opts.step_tol) break;
      f_new = opts.value_only ? opts.value_only(x_new) : fn(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * g.dot(step)) {
        if (opts.value_only) f_new = fn(x_new, g_new);
        if (std::isfinite(f_new) && g_new.allFinite()) {
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (!mem.empty()) {
        mem.clear();  // retry once from a fresh quasi-Newton state
        continue;
      }
      res.converged = true;  // no progress possible along -g
      break;
    }

    const Vector s = x_new - x;
    const Vector y = g_new - g;
    if (s.dot(y) > 1e-10 * s.norm() * y.norm())
      mem.emplace_back(s, y);
    while (static_cast<int>(mem.size()) > opts.memory) mem.pop_front();

    x = std::move(x_new);
    f = f_new;
    g = g_new;
    ++res.iterations;
  }

  res.x = x;
  res.f = f;
  if (res.iterations >= opts.max_iter) res.converged = true;
  return res;
}

}  // namespace rmobo
