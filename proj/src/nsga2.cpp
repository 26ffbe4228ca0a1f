#include "rmobo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rmobo/rng.hpp"

namespace rmobo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> crowding_distance(const Matrix& Y,
                                      const std::vector<int>& members) {
  const size_t k = members.size();
  std::vector<double> crowd(k, 0.0);
  if (k <= 2) {
    std::fill(crowd.begin(), crowd.end(), kInf);
    return crowd;
  }
  std::vector<size_t> idx(k);
  for (Eigen::Index m = 0; m < Y.cols(); ++m) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return Y(members[a], m) < Y(members[b], m);
    });
    const double lo = Y(members[idx.front()], m);
    const double hi = Y(members[idx.back()], m);
    crowd[idx.front()] = kInf;
    crowd[idx.back()] = kInf;
    if (hi - lo <= 0.0) continue;
    for (size_t i = 1; i + 1 < k; ++i)
      crowd[idx[i]] +=
          (Y(members[idx[i + 1]], m) - Y(members[idx[i - 1]], m)) / (hi - lo);
  }
  return crowd;
}

double sbx_spread(double u, double eta) {
  return u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                  : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
}

// Bounded polynomial mutation (Deb).
double poly_mutate(double x, double lo, double hi, double eta,
                   RngStream& rng) {
  const double u = rng.uniform();
  const double span = hi - lo;
  const double d1 = (x - lo) / span;
  const double d2 = (hi - x) / span;
  double delta;
  if (u < 0.5) {
    const double b = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
    delta = std::pow(b, 1.0 / (eta + 1.0)) - 1.0;
  } else {
    const double b = 2.0 * (1.0 - u) +
                     2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
    delta = 1.0 - std::pow(b, 1.0 / (eta + 1.0));
  }
  return std::clamp(x + delta * span, lo, hi);
}

}  // namespace

ParetoFront nsga2_run(const VectorObjective& objective,
                      const DesignSpace& space, const EaConfig& cfg,
                      const GenerationCallback& on_generation) {
  const int pop = cfg.population;
  if (pop < 4 || pop % 2 != 0)
    throw std::invalid_argument("nsga2: population must be even and >= 4");
  if (cfg.generations < 1)
    throw std::invalid_argument("nsga2: generations < 1");
  const Eigen::Index d = space.dim();
  const double pm = cfg.mutation_prob < 0.0
                        ? 1.0 / static_cast<double>(d)
                        : cfg.mutation_prob;
  RngStream rng(cfg.seed);

  Matrix X(pop, d);
  for (int i = 0; i < pop; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      X(i, j) = rng.uniform(space.lower[j], space.upper[j]);
  Matrix Y(pop, objective(X.row(0).transpose()).size());
  for (int i = 0; i < pop; ++i)
    Y.row(i) = objective(X.row(i).transpose()).transpose();

  std::vector<int> rank = non_dominated_sort(Y);
  std::vector<double> crowd(pop, 0.0);
  {
    std::vector<std::vector<int>> fronts;
    for (int i = 0; i < pop; ++i) {
      if (rank[i] >= static_cast<int>(fronts.size()))
        fronts.resize(rank[i] + 1);
      fronts[rank[i]].push_back(i);
    }
    for (const auto& f : fronts) {
      const auto c = crowding_distance(Y, f);
      for (size_t i = 0; i < f.size(); ++i) crowd[f[i]] = c[i];
    }
  }

  const auto pick_index = [&](int n) {
    return std::min<int>(static_cast<int>(rng.uniform() * n), n - 1);
  };
  // Binary tournament on (rank, crowding); ties resolve to the lower index.
  const auto tournament = [&]() {
    const int a = pick_index(pop), b = pick_index(pop);
    if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
    if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
    return std::min(a, b);
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    Matrix Xc(pop, d);
    for (int i = 0; i < pop; i += 2) {
      Vector p1 = X.row(tournament());
      Vector p2 = X.row(tournament());
      if (rng.uniform() <= cfg.crossover_prob) {
        for (Eigen::Index j = 0; j < d; ++j) {
          if (rng.uniform() > 0.5 || std::abs(p1[j] - p2[j]) < 1e-14) continue;
          const double beta = sbx_spread(rng.uniform(), cfg.crossover_eta);
          const double c1 = 0.5 * ((1.0 + beta) * p1[j] + (1.0 - beta) * p2[j]);
          const double c2 = 0.5 * ((1.0 - beta) * p1[j] + (1.0 + beta) * p2[j]);
          p1[j] = std::clamp(c1, space.lower[j], space.upper[j]);
          p2[j] = std::clamp(c2, space.lower[j], space.upper[j]);
        }
      }
      for (Eigen::Index j = 0; j < d; ++j) {
        if (rng.uniform() < pm)
          p1[j] = poly_mutate(p1[j], space.lower[j], space.upper[j],
                              cfg.mutation_eta, rng);
        if (rng.uniform() < pm)
          p2[j] = poly_mutate(p2[j], space.lower[j], space.upper[j],
                              cfg.mutation_eta, rng);
      }
      Xc.row(i) = p1.transpose();
      Xc.row(i + 1) = p2.transpose();
    }
    Matrix Yc(pop, Y.cols());
    for (int i = 0; i < pop; ++i)
      Yc.row(i) = objective(Xc.row(i).transpose()).transpose();

    // Elitist environmental selection on parents + children.
    Matrix Xall(2 * pop, d), Yall(2 * pop, Y.cols());
    Xall << X, Xc;
    Yall << Y, Yc;
    const std::vector<int> rank_all = non_dominated_sort(Yall);
    std::vector<std::vector<int>> fronts;
    for (int i = 0; i < 2 * pop; ++i) {
      if (rank_all[i] >= static_cast<int>(fronts.size()))
        fronts.resize(rank_all[i] + 1);
      fronts[rank_all[i]].push_back(i);
    }
    std::vector<int> chosen;
    chosen.reserve(pop);
    std::vector<double> chosen_crowd;
    for (const auto& f : fronts) {
      const auto c = crowding_distance(Yall, f);
      if (chosen.size() + f.size() <= static_cast<size_t>(pop)) {
        for (size_t i = 0; i < f.size(); ++i) {
          chosen.push_back(f[i]);
          chosen_crowd.push_back(c[i]);
        }
      } else {
        std::vector<size_t> idx(f.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](size_t a, size_t b) { return c[a] > c[b]; });
        for (size_t i = 0; chosen.size() < static_cast<size_t>(pop); ++i) {
          chosen.push_back(f[idx[i]]);
          chosen_crowd.push_back(c[idx[i]]);
        }
      }
      if (chosen.size() == static_cast<size_t>(pop)) break;
    }
    Matrix Xn(pop, d), Yn(pop, Y.cols());
    for (int i = 0; i < pop; ++i) {
      Xn.row(i) = Xall.row(chosen[i]);
      Yn.row(i) = Yall.row(chosen[i]);
    }
    X = std::move(Xn);
    Y = std::move(Yn);
    rank = non_dominated_sort(Y);
    std::vector<std::vector<int>> fs;
    for (int i = 0; i < pop; ++i) {
      if (rank[i] >= static_cast<int>(fs.size())) fs.resize(rank[i] + 1);
      fs[rank[i]].push_back(i);
    }
    for (const auto& f : fs) {
      const auto c = crowding_distance(Y, f);
      for (size_t i = 0; i < f.size(); ++i) crowd[f[i]] = c[i];
    }
    if (on_generation) {
      const ParetoFront fr = extract_front(Y, X);
      on_generation(gen, fr.points);
    }
  }
  return extract_front(Y, X);
}

}  // namespace rmobo
