// NSGA-II: non-dominated sorting + crowding selection, simulated binary
// crossover, polynomial mutation. Used for reference-front generation on the
// true Bayes risk and for out-of-sample recommendation on surrogate means.
#pragma once

#include <cstdint>
#include <functional>

#include "rmobo/pareto.hpp"
#include "rmobo/types.hpp"

namespace rmobo {

struct EaConfig {
  int population = 60;  // even, >= 4
  int generations = 500;
  double crossover_prob = 0.9;
  double crossover_eta = 15.0;
  double mutation_prob = -1.0;  // < 0 means 1/d
  double mutation_eta = 20.0;
  std::uint64_t seed = 0;
};

using VectorObjective = std::function<Vector(const Vector&)>;
using GenerationCallback =
    std::function<void(int generation, const Matrix& front_points)>;

// Returns the final population's first front (duplicates collapsed), with
// producing inputs; deterministic given cfg.seed.
ParetoFront nsga2_run(const VectorObjective& objective,
                      const DesignSpace& space, const EaConfig& cfg,
                      const GenerationCallback& on_generation = nullptr);

}  // namespace rmobo
