// Optimization drivers: the two-stage robust loop, the non-robust baseline,
// the one-shot EA-on-GP baseline, recommendation, scoring, and the empirical
// distinct-robust-front check.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmobo/acquisition.hpp"
#include "rmobo/nsga2.hpp"
#include "rmobo/pareto.hpp"
#include "rmobo/problem.hpp"
#include "rmobo/robust_gp.hpp"

namespace rmobo {

struct RunConfig {
  std::string problem = "sinlinforrester";
  std::string method = "rmobo";      // rmobo | mobo | ea-gp-os
  std::string acquisition = "ehvi";  // ehvi | qehvi
  int q = 1;
  int n_iter = 10;
  int n_initial = 0;  // 0 -> 5 * d
  std::uint64_t seed = 0;
  Eigen::Index n_ke = 2000;  // MC samples for the kernel expectation
  double eps = 1e-3;         // normalized duplicate/boundary threshold
  int threads = 1;
  std::string out_dir;

  void validate() const;
  int resolved_n_initial(Eigen::Index d) const {
    return n_initial > 0 ? n_initial : static_cast<int>(5 * d);
  }
  // Canonical `key = value` text; its hash identifies the configuration.
  std::string canonical_text() const;
};

struct IterationLog {
  Matrix pending;             // q x d, first-stage query (pre-AL)
  Matrix final_points;        // q x d, after optional relocation
  std::vector<int> al_fired;  // per batch element
  double acq_value = 0.0;
  Vector ref_point;
  double wall_seconds = 0.0;
};

struct RunRecord {
  RunConfig cfg;
  Matrix X;                        // all evaluated inputs
  Matrix Y;                        // observations (maximization convention)
  std::vector<int> iteration_of;   // 0 = initial design, then 1..n_iter
  std::vector<int> al_relocated;   // per evaluated row
  Matrix Q;                        // pending query pool (pre-AL points)
  std::vector<int> q_iteration;    // iteration that produced each Q row
  std::vector<IterationLog> iterations;
  ParetoFront insample;            // final in-sample recommendation
  ParetoFront outofsample;         // NSGA-II search over the surrogate mean
  double total_wall_seconds = 0.0;
};

RunRecord run_rmobo(const RunConfig& cfg);
RunRecord run_mobo_nonrobust(const RunConfig& cfg);
RunRecord run_ea_gp_os(const RunConfig& cfg);
RunRecord run_method(const RunConfig& cfg);  // dispatch on cfg.method

enum class RecommendMode { InSample, OutOfSample };
ParetoFront recommend(const RunRecord& record, RecommendMode mode);

// AVD of the iteration-t in-sample recommendation, re-evaluated under the
// true Bayes risk and scaled by the reference front. History has n_iter + 1
// entries (initial design included); final_only computes just the last.
struct ScoreEntry {
  int iteration;
  double avd;
};
std::vector<ScoreEntry> score_run(const RunRecord& record,
                                  const Matrix& reference_front,
                                  bool final_only = false);

struct Prop1ObjectiveReport {
  int objective = 0;
  Vector x_f_star;        // grid argmax of f_i
  Vector x_j_star;        // grid argmax of J_i
  double distance = 0.0;  // normalized distance between the two
  bool f_of_xj_dominated = false;
  bool contributes = false;
};
struct Prop1Report {
  std::vector<Prop1ObjectiveReport> objectives;
  bool certified = false;  // a distinct robust Pareto front is certified
};
struct Prop1Options {
  Eigen::Index grid_per_dim = 0;  // 0 -> 1001 for d=1, 201 otherwise
  Eigen::Index n_mc = 10000;
  double distance_tol = 0.02;  // normalized units
  std::uint64_t seed = 20240501;
};
Prop1Report check_proposition1(const Problem& problem,
                               const Prop1Options& opts = {});

// Reference fronts: exhaustive NSGA-II on the true Bayes risk with frozen
// common-random-number draws; cached to versioned CSV files keyed by
// (problem, seed, config hash).
struct ReferenceFrontConfig {
  int population = 60;
  int generations = 500;
  Eigen::Index n_mc = 10000;
  std::uint64_t seed = 0;
};
ParetoFront generate_reference_front(const Problem& problem,
                                     const ReferenceFrontConfig& cfg);
std::string reference_front_filename(const std::string& problem,
                                     const ReferenceFrontConfig& cfg);
std::string save_reference_front(const ParetoFront& front,
                                 const Problem& problem,
                                 const ReferenceFrontConfig& cfg,
                                 const std::string& out_dir);

// RunRecord persistence: CSV tables plus a JSON manifest.
void save_run(const RunRecord& record, const std::string& dir);
RunRecord load_run(const std::string& dir);
void save_front_csv(const std::string& path, const ParetoFront& front);
ParetoFront load_front_csv(const std::string& path);

}  // namespace rmobo
