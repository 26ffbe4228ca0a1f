// Dominance, non-dominated sorting, 2-d hypervolume, averaged Hausdorff
// distance. All operations use the maximization convention.
#pragma once

#include <vector>

#include "rmobo/types.hpp"

namespace rmobo {

struct ParetoFront {
  Matrix points;  // k x M objective vectors, mutually non-dominated
  Matrix inputs;  // k x d producing inputs (may be 0 x 0 when unknown)
};

// True iff a >= b elementwise with at least one strict coordinate.
bool dominates(const Vector& a, const Vector& b);

// Rank 0 = first front; rank r points are non-dominated among rank >= r.
std::vector<int> non_dominated_sort(const Matrix& Y);

// Rank-0 rows with duplicate objective vectors (1e-12 per coordinate)
// collapsed. inputs may be empty; otherwise row-matched with Y.
ParetoFront extract_front(const Matrix& Y, const Matrix& inputs = Matrix());

// Exact dominated area above ref. Points failing to dominate ref are
// ignored. Requires M = 2.
double hypervolume_2d(const Matrix& front, const Vector& ref);

// Averaged Hausdorff distance, p = 2, Euclidean inner norm.
double avd(const Matrix& F, const Matrix& F_star);

// Per-objective affine map sending F_star_raw's min/max to 0/1, applied to Y
// (no clipping). Errors on a zero per-objective range.
Matrix scale_objectives(const Matrix& Y, const Matrix& F_star_raw);

}  // namespace rmobo
