#include "rmobo/driver.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rmobo/io.hpp"
#include "rmobo/rng.hpp"

namespace rmobo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr int kQehviBaseSamples = 512;
constexpr int kOsPopulation = 20;    // out-of-sample NSGA-II settings
constexpr int kOsGenerations = 200;

std::vector<GpModel> fit_models(const Problem& problem, const Matrix& X,
                                const Matrix& Y, std::uint64_t seed,
                                int fit_index) {
  std::vector<GpModel> models;
  models.reserve(Y.cols());
  const FitOptions opts;
  for (Eigen::Index i = 0; i < Y.cols(); ++i) {
    RngStream rng(derive_seed(seed, "fit", fit_index, i));
    models.push_back(fit_map(X, Y.col(i), problem.space, opts, rng));
  }
  return models;
}

std::vector<GpModel> fit_models_with_retry(const Problem& problem,
                                           const Matrix& X, const Matrix& Y,
                                           std::uint64_t seed, int fit_index) {
  try {
    return fit_models(problem, X, Y, seed, fit_index);
  } catch (const std::runtime_error&) {
    // one retry with fresh restarts before giving up
    return fit_models(problem, X, Y, derive_seed(seed, "fit-retry"),
                      fit_index);
  }
}

Matrix uniform_design(const DesignSpace& space, int n, RngStream& rng) {
  Matrix X(n, space.dim());
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < space.dim(); ++j)
      X(i, j) = rng.uniform(space.lower[j], space.upper[j]);
  return X;
}

Matrix standard_normals(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  Matrix Z(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) Z(i, j) = rng.normal();
  return Z;
}

FixedNoiseSamples zero_samples(Eigen::Index d) {
  FixedNoiseSamples s;
  s.E = Matrix::Zero(1, d);
  s.E2 = Matrix::Zero(1, d);
  return s;
}

Vector tile(const Vector& v, int times) {
  Vector out(v.size() * times);
  for (int i = 0; i < times; ++i) out.segment(i * v.size(), v.size()) = v;
  return out;
}

// Shared two-stage loop; the non-robust baseline runs the same loop with
// zero kernel-expectation samples (the robust GP then coincides with the
// plain GP) and without the active-learning stage.
RunRecord run_bo(const RunConfig& cfg, bool robust) {
  cfg.validate();
  const auto t0 = Clock::now();
  const Problem problem = make_problem(cfg.problem);
  const Eigen::Index d = problem.space.dim();
  const int M = problem.num_objectives;
  const int n_init = cfg.resolved_n_initial(d);
  const DesignSpace enlarged = problem.enlarged_space();

  RunRecord rec;
  rec.cfg = cfg;

  RngStream init_rng(derive_seed(cfg.seed, "init-design"));
  rec.X = uniform_design(problem.space, n_init, init_rng);
  rec.Y = evaluate_objectives(problem, rec.X);
  rec.iteration_of.assign(n_init, 0);
  rec.al_relocated.assign(n_init, 0);
  rec.Q.resize(0, d);

  const FixedNoiseSamples samples =
      robust ? draw_fixed_samples(problem.noise, cfg.n_ke, cfg.seed)
             : zero_samples(d);

  const Vector lo_tiled = tile(problem.space.lower, cfg.q);
  const Vector hi_tiled = tile(problem.space.upper, cfg.q);
  AcqOptBudget budget;
  budget.raw = 1024 * static_cast<int>(d);

  for (int t = 0; t < cfg.n_iter; ++t) {
    const auto it0 = Clock::now();
    IterationLog log;
    std::vector<GpModel> models =
        fit_models_with_retry(problem, rec.X, rec.Y, cfg.seed, t);
    const RobustGp rgp =
        make_robust_gp(std::move(models), problem.noise, samples);

    const Matrix mj_train = robust_mean(rgp, rec.X, cfg.threads);
    const ParetoFront front = extract_front(mj_train, rec.X);
    AcquisitionContext ctx;
    RobustPosteriorProvider provider(rgp, cfg.threads);
    ctx.posterior = &provider;
    ctx.front = front.points;
    ctx.ref = ehvi_reference(front.points);
    if (cfg.acquisition == "qehvi") {
      RngStream base_rng(derive_seed(cfg.seed, "qehvi-base", t));
      ctx.base_samples =
          standard_normals(kQehviBaseSamples, cfg.q * M, base_rng);
    }
    const BatchObjective acq = make_acquisition_batch(ctx, cfg.q, d);
    const AcqOptResult opt = optimize_acquisition(
        acq, lo_tiled, hi_tiled, budget, derive_seed(cfg.seed, "acq", t));

    Matrix pending(cfg.q, d);
    for (int j = 0; j < cfg.q; ++j)
      pending.row(j) = opt.x.segment(j * d, d).transpose();
    log.pending = pending;
    log.acq_value = opt.value;
    log.ref_point = ctx.ref;

    const Eigen::Index q_old = rec.Q.rows();
    rec.Q.conservativeResize(q_old + cfg.q, Eigen::NoChange);
    rec.Q.bottomRows(cfg.q) = pending;
    for (int j = 0; j < cfg.q; ++j) rec.q_iteration.push_back(t + 1);

    Matrix final_points = pending;
    log.al_fired.assign(cfg.q, 0);
    if (robust) {
      for (int j = 0; j < cfg.q; ++j) {
        const Vector xj = pending.row(j).transpose();
        if (al_activation(xj, rec.X, problem.space, cfg.eps)) {
          log.al_fired[j] = 1;
          final_points.row(j) =
              al_relocate(rgp, xj, problem.al_box_halfwidth, enlarged, budget,
                          derive_seed(cfg.seed, "al", t, j))
                  .transpose();
        }
      }
    }
    log.final_points = final_points;

    const Matrix y_new = evaluate_objectives(problem, final_points);
    const Eigen::Index n_old = rec.X.rows();
    rec.X.conservativeResize(n_old + cfg.q, Eigen::NoChange);
    rec.Y.conservativeResize(n_old + cfg.q, Eigen::NoChange);
    rec.X.bottomRows(cfg.q) = final_points;
    rec.Y.bottomRows(cfg.q) = y_new;
    for (int j = 0; j < cfg.q; ++j) {
      rec.iteration_of.push_back(t + 1);
      rec.al_relocated.push_back(log.al_fired[j]);
    }
    log.wall_seconds = seconds_since(it0);
    rec.iterations.push_back(std::move(log));
  }

  // Final model, candidate ranking, and out-of-sample search.
  std::vector<GpModel> models =
      fit_models_with_retry(problem, rec.X, rec.Y, cfg.seed, cfg.n_iter);
  const RobustGp rgp =
      make_robust_gp(std::move(models), problem.noise, samples);
  if (robust) {
    Matrix X_cand(rec.X.rows() + rec.Q.rows(), d);
    X_cand << rec.X, rec.Q;
    rec.insample =
        extract_front(robust_mean(rgp, X_cand, cfg.threads), X_cand);
  } else {
    rec.insample = extract_front(rec.Y, rec.X);
  }
  EaConfig os;
  os.population = kOsPopulation;
  os.generations = kOsGenerations;
  os.seed = derive_seed(cfg.seed, "os-nsga");
  rec.outofsample = nsga2_run(
      [&](const Vector& x) {
        return robust_mean(rgp, x.transpose()).row(0).transpose().eval();
      },
      problem.space, os);
  rec.total_wall_seconds = seconds_since(t0);
  if (!cfg.out_dir.empty()) save_run(rec, cfg.out_dir);
  return rec;
}

}  // namespace

void RunConfig::validate() const {
  if (method != "rmobo" && method != "mobo" && method != "ea-gp-os")
    throw std::invalid_argument("RunConfig: unknown method " + method);
  if (acquisition != "ehvi" && acquisition != "qehvi")
    throw std::invalid_argument("RunConfig: unknown acquisition " +
                                acquisition);
  if (q < 1) throw std::invalid_argument("RunConfig: q < 1");
  if (acquisition == "ehvi" && q != 1)
    throw std::invalid_argument("RunConfig: ehvi requires q = 1");
  if (n_iter < 0) throw std::invalid_argument("RunConfig: n_iter < 0");
  if (n_ke < 1) throw std::invalid_argument("RunConfig: n_ke < 1");
  if (eps < 0.0) throw std::invalid_argument("RunConfig: eps < 0");
}

std::string RunConfig::canonical_text() const {
  const Problem problem = make_problem(this->problem);
  std::ostringstream os;
  os << "problem = " << problem.name << "\n";
  os << "method = " << method << "\n";
  os << "acquisition = " << acquisition << "\n";
  os << "q = " << q << "\n";
  os << "n_iter = " << n_iter << "\n";
  os << "n_initial = " << resolved_n_initial(problem.space.dim()) << "\n";
  os << "seed = " << seed << "\n";
  os << "n_ke = " << n_ke << "\n";
  os << "eps = " << format_double(eps) << "\n";
  return os.str();
}

RunRecord run_rmobo(const RunConfig& cfg) { return run_bo(cfg, true); }

RunRecord run_mobo_nonrobust(const RunConfig& cfg) {
  return run_bo(cfg, false);
}

RunRecord run_ea_gp_os(const RunConfig& cfg) {
  cfg.validate();
  const auto t0 = Clock::now();
  const Problem problem = make_problem(cfg.problem);
  const Eigen::Index d = problem.space.dim();
  const int n_init = cfg.resolved_n_initial(d);
  const int n_total = n_init + cfg.q * cfg.n_iter;

  RunRecord rec;
  rec.cfg = cfg;
  RngStream init_rng(derive_seed(cfg.seed, "init-design"));
  rec.X = uniform_design(problem.space, n_total, init_rng);
  rec.Y = evaluate_objectives(problem, rec.X);
  rec.iteration_of.assign(n_init, 0);
  for (int t = 1; t <= cfg.n_iter; ++t)
    for (int j = 0; j < cfg.q; ++j) rec.iteration_of.push_back(t);
  rec.al_relocated.assign(n_total, 0);
  rec.Q.resize(0, d);

  std::vector<GpModel> models =
      fit_models_with_retry(problem, rec.X, rec.Y, cfg.seed, cfg.n_iter);
  const FixedNoiseSamples samples =
      draw_fixed_samples(problem.noise, cfg.n_ke, cfg.seed);
  const RobustGp rgp =
      make_robust_gp(std::move(models), problem.noise, samples);

  rec.insample = extract_front(rec.Y, rec.X);
  EaConfig os;
  os.population = kOsPopulation;
  os.generations = kOsGenerations;
  os.seed = derive_seed(cfg.seed, "os-nsga");
  rec.outofsample = nsga2_run(
      [&](const Vector& x) {
        return robust_mean(rgp, x.transpose()).row(0).transpose().eval();
      },
      problem.space, os);
  rec.total_wall_seconds = seconds_since(t0);
  if (!cfg.out_dir.empty()) save_run(rec, cfg.out_dir);
  return rec;
}

RunRecord run_method(const RunConfig& cfg) {
  if (cfg.method == "rmobo") return run_rmobo(cfg);
  if (cfg.method == "mobo") return run_mobo_nonrobust(cfg);
  if (cfg.method == "ea-gp-os") return run_ea_gp_os(cfg);
  throw std::invalid_argument("run_method: unknown method " + cfg.method);
}

ParetoFront recommend(const RunRecord& record, RecommendMode mode) {
  return mode == RecommendMode::InSample ? record.insample
                                         : record.outofsample;
}

std::vector<ScoreEntry> score_run(const RunRecord& record,
                                  const Matrix& reference_front,
                                  bool final_only) {
  const RunConfig& cfg = record.cfg;
  const Problem problem = make_problem(cfg.problem);
  const Eigen::Index d = problem.space.dim();
  const int n_init = cfg.resolved_n_initial(d);
  const Matrix scaled_ref =
      scale_objectives(reference_front, reference_front);

  // Method- and seed-independent oracle draws so every run is scored on the
  // same footing.
  RngStream oracle_rng(
      derive_seed(fnv1a(problem.name), "score-oracle"));
  const Matrix oracle_draws = sample_noise(problem.noise, 10000, oracle_rng);

  const FixedNoiseSamples samples =
      cfg.method == "mobo"
          ? FixedNoiseSamples()
          : draw_fixed_samples(problem.noise, cfg.n_ke, cfg.seed);

  std::vector<ScoreEntry> out;
  const int t_begin = final_only ? cfg.n_iter : 0;
  for (int t = t_begin; t <= cfg.n_iter; ++t) {
    const int n_data = n_init + cfg.q * t;
    const Matrix Xp = record.X.topRows(n_data);
    const Matrix Yp = record.Y.topRows(n_data);
    ParetoFront rec_front;
    if (cfg.method == "mobo") {
      rec_front = extract_front(Yp, Xp);
    } else {
      std::vector<GpModel> models =
          fit_models_with_retry(problem, Xp, Yp, cfg.seed, t);
      const RobustGp rgp =
          make_robust_gp(std::move(models), problem.noise, samples);
      if (cfg.method == "ea-gp-os") {
        EaConfig os;
        os.population = kOsPopulation;
        os.generations = kOsGenerations;
        os.seed = derive_seed(cfg.seed, "os-nsga", t);
        rec_front = nsga2_run(
            [&](const Vector& x) {
              return robust_mean(rgp, x.transpose()).row(0).transpose().eval();
            },
            problem.space, os);
      } else {
        Eigen::Index n_q = 0;
        for (size_t i = 0; i < record.q_iteration.size(); ++i)
          if (record.q_iteration[i] <= t) ++n_q;
        Matrix X_cand(n_data + n_q, d);
        X_cand.topRows(n_data) = Xp;
        X_cand.bottomRows(n_q) = record.Q.topRows(n_q);
        rec_front = extract_front(robust_mean(rgp, X_cand, cfg.threads),
                                  X_cand);
      }
    }
    const Matrix j_true =
        bayes_risk_oracle_crn(problem, rec_front.inputs, oracle_draws);
    const Matrix scaled = scale_objectives(j_true, reference_front);
    out.push_back({t, avd(scaled, scaled_ref)});
  }
  return out;
}

Prop1Report check_proposition1(const Problem& problem,
                               const Prop1Options& opts) {
  const Eigen::Index d = problem.space.dim();
  Eigen::Index res = opts.grid_per_dim;
  if (res <= 0) res = (d == 1) ? 1001 : 201;

  Matrix grid;
  if (d == 1) {
    grid.resize(res, 1);
    for (Eigen::Index i = 0; i < res; ++i)
      grid(i, 0) = problem.space.lower[0] +
                   problem.space.range()[0] * i / double(res - 1);
  } else if (d == 2) {
    grid.resize(res * res, 2);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < res; ++i)
      for (Eigen::Index j = 0; j < res; ++j, ++r) {
        grid(r, 0) = problem.space.lower[0] +
                     problem.space.range()[0] * i / double(res - 1);
        grid(r, 1) = problem.space.lower[1] +
                     problem.space.range()[1] * j / double(res - 1);
      }
  } else {
    grid = halton_points(20000, d);
    grid.array().rowwise() *= problem.space.range().transpose().array();
    grid.rowwise() += problem.space.lower.transpose();
  }

  const Matrix F = evaluate_objectives(problem, grid);
  RngStream rng(derive_seed(opts.seed, "prop1-mc"));
  const Matrix draws = sample_noise(problem.noise, opts.n_mc, rng);
  const Matrix J = bayes_risk_oracle_crn(problem, grid, draws);

  const Vector col_scale =
      (F.colwise().maxCoeff() - F.colwise().minCoeff()).cwiseMax(1e-12);

  Prop1Report report;
  for (int i = 0; i < problem.num_objectives; ++i) {
    Prop1ObjectiveReport obj;
    obj.objective = i;
    Eigen::Index kf = 0, kj = 0;
    F.col(i).maxCoeff(&kf);
    J.col(i).maxCoeff(&kj);
    obj.x_f_star = grid.row(kf);
    obj.x_j_star = grid.row(kj);
    obj.distance = (problem.space.to_unit(obj.x_f_star) -
                    problem.space.to_unit(obj.x_j_star))
                       .norm();
    const Vector f_at_xj = F.row(kj);
    obj.f_of_xj_dominated = false;
    for (Eigen::Index r = 0; r < F.rows(); ++r) {
      bool all_ge = true, one_margin = false;
      for (Eigen::Index c = 0; c < F.cols(); ++c) {
        if (F(r, c) < f_at_xj[c]) all_ge = false;
        if (F(r, c) > f_at_xj[c] + 1e-9 * col_scale[c]) one_margin = true;
      }
      if (all_ge && one_margin) {
        obj.f_of_xj_dominated = true;
        break;
      }
    }
    obj.contributes =
        obj.distance > opts.distance_tol && obj.f_of_xj_dominated;
    report.certified = report.certified || obj.contributes;
    report.objectives.push_back(std::move(obj));
  }
  return report;
}

ParetoFront generate_reference_front(const Problem& problem,
                                     const ReferenceFrontConfig& cfg) {
  RngStream mc_rng(derive_seed(cfg.seed, "reffront-mc"));
  const Matrix draws = sample_noise(problem.noise, cfg.n_mc, mc_rng);
  EaConfig ea;
  ea.population = cfg.population;
  ea.generations = cfg.generations;
  ea.seed = derive_seed(cfg.seed, "reffront-ea");
  return nsga2_run(
      [&](const Vector& x) {
        return bayes_risk_oracle_crn(problem, x.transpose(), draws)
            .row(0)
            .transpose()
            .eval();
      },
      problem.space, ea);
}

namespace {
std::string ref_cfg_hash(const ReferenceFrontConfig& cfg) {
  std::ostringstream os;
  os << "v1:pop=" << cfg.population << ":gens=" << cfg.generations
     << ":n_mc=" << cfg.n_mc;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%08llx",
                static_cast<unsigned long long>(hash_string(os.str()) &
                                                0xffffffffULL));
  return buf;
}
}  // namespace

std::string reference_front_filename(const std::string& problem,
                                     const ReferenceFrontConfig& cfg) {
  std::ostringstream os;
  os << "reffront_" << problem << "_s" << cfg.seed << "_" << ref_cfg_hash(cfg)
     << ".csv";
  return os.str();
}

std::string save_reference_front(const ParetoFront& front,
                                 const Problem& problem,
                                 const ReferenceFrontConfig& cfg,
                                 const std::string& out_dir) {
  ensure_directory(out_dir);
  const std::string path =
      out_dir + "/" + reference_front_filename(problem.name, cfg);
  save_front_csv(path, front);
  nlohmann::json meta;
  meta["format_version"] = 1;
  meta["problem"] = problem.name;
  meta["seed"] = cfg.seed;
  meta["population"] = cfg.population;
  meta["generations"] = cfg.generations;
  meta["n_mc"] = cfg.n_mc;
  std::ofstream mf(path + ".json");
  mf << meta.dump(2) << "\n";
  return path;
}

void save_front_csv(const std::string& path, const ParetoFront& front) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < front.inputs.cols(); ++j)
    header.push_back("x" + std::to_string(j + 1));
  for (Eigen::Index j = 0; j < front.points.cols(); ++j)
    header.push_back("j" + std::to_string(j + 1));
  Matrix rows(front.points.rows(), front.inputs.cols() + front.points.cols());
  if (front.inputs.cols() > 0) rows.leftCols(front.inputs.cols()) = front.inputs;
  rows.rightCols(front.points.cols()) = front.points;
  write_csv(path, header, rows);
}

ParetoFront load_front_csv(const std::string& path) {
  std::vector<std::string> header;
  const Matrix rows = read_csv(path, &header);
  Eigen::Index n_inputs = 0;
  for (const auto& h : header)
    if (!h.empty() && h[0] == 'x') ++n_inputs;
  ParetoFront front;
  front.inputs = rows.leftCols(n_inputs);
  front.points = rows.rightCols(rows.cols() - n_inputs);
  return front;
}

void save_run(const RunRecord& record, const std::string& dir) {
  ensure_directory(dir);
  const RunConfig& cfg = record.cfg;
  const Eigen::Index d = record.X.cols();
  const Eigen::Index M = record.Y.cols();

  {
    std::ofstream cf(dir + "/config.txt");
    cf << cfg.canonical_text();
  }
  {
    nlohmann::json m;
    m["format_version"] = 1;
    m["problem"] = cfg.problem;
    m["method"] = cfg.method;
    m["acquisition"] = cfg.acquisition;
    m["q"] = cfg.q;
    m["n_iter"] = cfg.n_iter;
    m["n_initial"] = cfg.resolved_n_initial(d);
    m["seed"] = cfg.seed;
    m["n_ke"] = cfg.n_ke;
    m["eps"] = cfg.eps;
    m["config_hash"] = hash_string(cfg.canonical_text());
    m["budget_evaluations"] = record.X.rows();
    m["total_wall_seconds"] = record.total_wall_seconds;
    m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                         std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION);
    m["rmobo_version"] = "0.1.0";
    std::ofstream mf(dir + "/manifest.json");
    mf << m.dump(2) << "\n";
  }
  {
    std::vector<std::string> header = {"iter", "al"};
    for (Eigen::Index j = 0; j < d; ++j)
      header.push_back("x" + std::to_string(j + 1));
    for (Eigen::Index j = 0; j < M; ++j)
      header.push_back("y" + std::to_string(j + 1));
    Matrix rows(record.X.rows(), 2 + d + M);
    for (Eigen::Index i = 0; i < record.X.rows(); ++i) {
      rows(i, 0) = record.iteration_of[i];
      rows(i, 1) = record.al_relocated[i];
      rows.row(i).segment(2, d) = record.X.row(i);
      rows.row(i).segment(2 + d, M) = record.Y.row(i);
    }
    write_csv(dir + "/data.csv", header, rows);
  }
  {
    std::vector<std::string> header = {"iter", "j", "al", "acq_value"};
    for (Eigen::Index j = 0; j < M; ++j)
      header.push_back("ref" + std::to_string(j + 1));
    for (Eigen::Index j = 0; j < d; ++j)
      header.push_back("pending_x" + std::to_string(j + 1));
    for (Eigen::Index j = 0; j < d; ++j)
      header.push_back("final_x" + std::to_string(j + 1));
    const int q = cfg.q;
    Matrix rows(static_cast<Eigen::Index>(record.iterations.size()) * q,
                4 + M + 2 * d);
    Eigen::Index r = 0;
    for (size_t t = 0; t < record.iterations.size(); ++t) {
      const IterationLog& log = record.iterations[t];
      for (int j = 0; j < q; ++j, ++r) {
        rows(r, 0) = static_cast<double>(t + 1);
        rows(r, 1) = j;
        rows(r, 2) = log.al_fired[j];
        rows(r, 3) = log.acq_value;
        rows.row(r).segment(4, M) = log.ref_point.transpose();
        rows.row(r).segment(4 + M, d) = log.pending.row(j);
        rows.row(r).segment(4 + M + d, d) = log.final_points.row(j);
      }
    }
    write_csv(dir + "/queries.csv", header, rows);
  }
  save_front_csv(dir + "/front_insample.csv", record.insample);
  save_front_csv(dir + "/front_outofsample.csv", record.outofsample);
}

RunRecord load_run(const std::string& dir) {
  RunRecord rec;
  {
    std::ifstream mf(dir + "/manifest.json");
    if (!mf) throw std::runtime_error("load_run: no manifest in " + dir);
    nlohmann::json m;
    mf >> m;
    rec.cfg.problem = m["problem"].get<std::string>();
    rec.cfg.method = m["method"].get<std::string>();
    rec.cfg.acquisition = m["acquisition"].get<std::string>();
    rec.cfg.q = m["q"].get<int>();
    rec.cfg.n_iter = m["n_iter"].get<int>();
    rec.cfg.n_initial = m["n_initial"].get<int>();
    rec.cfg.seed = m["seed"].get<std::uint64_t>();
    rec.cfg.n_ke = m["n_ke"].get<Eigen::Index>();
    rec.cfg.eps = m["eps"].get<double>();
  }
  const Problem problem = make_problem(rec.cfg.problem);
  const Eigen::Index d = problem.space.dim();
  const Eigen::Index M = problem.num_objectives;
  {
    const Matrix rows = read_csv(dir + "/data.csv");
    rec.X = rows.middleCols(2, d);
    rec.Y = rows.middleCols(2 + d, M);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      rec.iteration_of.push_back(static_cast<int>(rows(i, 0)));
      rec.al_relocated.push_back(static_cast<int>(rows(i, 1)));
    }
  }
  {
    const Matrix rows = read_csv(dir + "/queries.csv");
    rec.Q.resize(rows.rows(), d);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      rec.q_iteration.push_back(static_cast<int>(rows(i, 0)));
      rec.Q.row(i) = rows.row(i).segment(4 + M, d);
    }
  }
  rec.insample = load_front_csv(dir + "/front_insample.csv");
  rec.outofsample = load_front_csv(dir + "/front_outofsample.csv");
  return rec;
}

}  // namespace rmobo
