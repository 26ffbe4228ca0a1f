// Benchmark problems: design space, vector objective, input noise, AL box.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rmobo/noise.hpp"
#include "rmobo/rng.hpp"
#include "rmobo/types.hpp"

namespace rmobo {

struct Problem {
  std::string name;
  DesignSpace space;
  int num_objectives = 0;
  // Deterministic objective map, total on the enlarged space
  // [lower - al_box_halfwidth, upper + al_box_halfwidth].
  std::function<Vector(const Vector&)> evaluate;
  NoiseDistribution noise;
  Vector al_box_halfwidth;

  DesignSpace enlarged_space() const {
    return DesignSpace(space.lower - al_box_halfwidth,
                       space.upper + al_box_halfwidth);
  }
};

// Objective values at x (maximization convention), one call per point.
Vector evaluate_objectives(const Problem& problem, const Vector& x);

// Row-wise evaluation.
Matrix evaluate_objectives(const Problem& problem, const Matrix& X);

// Monte Carlo estimate (1/n) sum_i f(x + xi_i) of the true Bayes risk.
// Ground-truth oracle: evaluates the true objective, no surrogate.
Vector bayes_risk_oracle(const Problem& problem, const Vector& x,
                         Eigen::Index n_mc, RngStream& rng);

// Same estimate over many points sharing one frozen draw set (common random
// numbers); used by grid searches and reference-front generation.
Matrix bayes_risk_oracle_crn(const Problem& problem, const Matrix& X,
                             const Matrix& noise_draws);

// Registry over the benchmark suite: vlmop2, sinlinforrester, mdtp2, mdtp3,
// braningmm.
Problem make_problem(const std::string& name);
std::vector<std::string> problem_names();

}  // namespace rmobo
