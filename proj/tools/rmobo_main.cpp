// rmobo command-line tool: runs, reference fronts, scoring, benchmark
// suites, and the empirical distinct-robust-front check.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmobo/driver.hpp"
#include "rmobo/io.hpp"
#include "rmobo/parallel.hpp"

namespace {

using namespace rmobo;

int cmd_run(const RunConfig& cfg) {
  const RunRecord rec = run_method(cfg);
  std::printf("run complete: %s/%s on %s, %d iterations, %lld evaluations\n",
              cfg.method.c_str(), cfg.acquisition.c_str(),
              cfg.problem.c_str(), cfg.n_iter,
              static_cast<long long>(rec.X.rows()));
  std::printf("in-sample front: %lld points; out-of-sample front: %lld "
              "points; wall %.1fs\n",
              static_cast<long long>(rec.insample.points.rows()),
              static_cast<long long>(rec.outofsample.points.rows()),
              rec.total_wall_seconds);
  if (!cfg.out_dir.empty())
    std::printf("record written to %s\n", cfg.out_dir.c_str());
  return 0;
}

int cmd_reference_front(const std::string& problem_name,
                        const ReferenceFrontConfig& cfg,
                        const std::string& out_dir) {
  const Problem problem = make_problem(problem_name);
  const ParetoFront front = generate_reference_front(problem, cfg);
  const std::string path =
      save_reference_front(front, problem, cfg, out_dir);
  std::printf("reference front (%lld points) -> %s\n",
              static_cast<long long>(front.points.rows()), path.c_str());
  return 0;
}

int cmd_score(const std::string& run_dir, const std::string& reference,
              bool final_only) {
  const RunRecord rec = load_run(run_dir);
  const ParetoFront ref = load_front_csv(reference);
  const auto history = score_run(rec, ref.points, final_only);
  std::vector<std::string> header = {"iter", "avd"};
  Matrix rows(history.size(), 2);
  for (size_t i = 0; i < history.size(); ++i) {
    rows(i, 0) = history[i].iteration;
    rows(i, 1) = history[i].avd;
    std::printf("iter %3d  avd %.6f\n", history[i].iteration, history[i].avd);
  }
  write_csv(run_dir + "/avd.csv", header, rows);
  std::printf("history written to %s/avd.csv\n", run_dir.c_str());
  return 0;
}

int cmd_check_prop1(const std::string& problem_name, Eigen::Index grid,
                    Eigen::Index n_mc) {
  const Problem problem = make_problem(problem_name);
  Prop1Options opts;
  if (grid > 0) opts.grid_per_dim = grid;
  if (n_mc > 0) opts.n_mc = n_mc;
  const Prop1Report report = check_proposition1(problem, opts);
  for (const auto& obj : report.objectives) {
    std::ostringstream xf, xj;
    xf << obj.x_f_star.transpose();
    xj << obj.x_j_star.transpose();
    std::printf(
        "objective %d: argmax f at [%s], argmax J at [%s]\n"
        "  normalized distance %.4f, f(x_J*) dominated: %s, premise "
        "holds: %s\n",
        obj.objective + 1, xf.str().c_str(), xj.str().c_str(), obj.distance,
        obj.f_of_xj_dominated ? "yes" : "no",
        obj.contributes ? "yes" : "no");
  }
  std::printf("distinct robust Pareto front certified: %s\n",
              report.certified ? "YES" : "no");
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(tok.substr(b, e - b + 1));
  }
  return out;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile_of(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double idx = p * (v.size() - 1);
  const size_t lo = static_cast<size_t>(idx);
  const size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (idx - lo) * (v[hi] - v[lo]);
}

// Full benchmark protocol: reference fronts, (problem x method x seed) runs,
// AVD histories, and median/quartile aggregation.
int cmd_suite(const std::string& config_path) {
  const auto kv = read_kv_config(config_path);
  const auto get = [&](const std::string& k, const std::string& def) {
    const auto it = kv.find(k);
    return it == kv.end() ? def : it->second;
  };
  const auto problems = split_list(get("problems", "mdtp3"));
  const auto methods = split_list(get("methods", "rmobo,mobo"));
  const std::string acq = get("acquisition", "ehvi");
  const int q = std::stoi(get("q", "1"));
  const int iters = std::stoi(get("iters", acq == "qehvi" ? "30" : "60"));
  const int n_seeds = std::stoi(get("seeds", "30"));
  const int threads = std::stoi(get("threads", "2"));
  const std::string out = get("out", "suite_out");
  ReferenceFrontConfig ref_cfg;
  ref_cfg.seed = std::stoull(get("reference_seed", "1234"));
  ref_cfg.population = std::stoi(get("reference_pop", "60"));
  ref_cfg.generations = std::stoi(get("reference_gens", "500"));

  ensure_directory(out);
  std::map<std::string, Matrix> ref_fronts;
  for (const auto& p : problems) {
    const Problem problem = make_problem(p);
    const std::string path =
        out + "/ref/" + reference_front_filename(p, ref_cfg);
    std::ifstream probe(path);
    if (probe) {
      ref_fronts[p] = load_front_csv(path).points;
      std::printf("reference front for %s: cached (%s)\n", p.c_str(),
                  path.c_str());
    } else {
      std::printf("generating reference front for %s...\n", p.c_str());
      const ParetoFront front = generate_reference_front(problem, ref_cfg);
      save_reference_front(front, problem, ref_cfg, out + "/ref");
      ref_fronts[p] = front.points;
    }
  }

  struct Job {
    std::string problem, method;
    int seed;
  };
  std::vector<Job> jobs;
  for (const auto& p : problems)
    for (const auto& m : methods)
      for (int s = 0; s < n_seeds; ++s) jobs.push_back({p, m, s});

  // history[job] -> avd per iteration
  std::vector<std::vector<ScoreEntry>> histories(jobs.size());
  parallel_chunks(static_cast<int>(jobs.size()), threads, [&](int j) {
    const Job& job = jobs[j];
    RunConfig cfg;
    cfg.problem = job.problem;
    cfg.method = job.method;
    cfg.acquisition = acq;
    cfg.q = q;
    cfg.n_iter = iters;
    cfg.seed = job.seed;
    cfg.out_dir = out + "/runs/" + job.problem + "_" + job.method + "_s" +
                  std::to_string(job.seed);
    const RunRecord rec = run_method(cfg);
    histories[j] = score_run(rec, ref_fronts.at(job.problem));
    std::printf("[%s %s seed %d] final avd %.4f\n", job.problem.c_str(),
                job.method.c_str(), job.seed,
                histories[j].back().avd);
  });

  std::vector<std::string> header = {"problem_id", "method_id", "iter",
                                     "median",     "q25",       "q75"};
  std::vector<std::array<double, 6>> rows;
  std::ofstream legend(out + "/aggregate_legend.txt");
  for (size_t pi = 0; pi < problems.size(); ++pi)
    legend << "problem_id " << pi << " = " << problems[pi] << "\n";
  for (size_t mi = 0; mi < methods.size(); ++mi)
    legend << "method_id " << mi << " = " << methods[mi] << "\n";
  for (size_t pi = 0; pi < problems.size(); ++pi) {
    for (size_t mi = 0; mi < methods.size(); ++mi) {
      for (int t = 0; t <= iters; ++t) {
        std::vector<double> vals;
        for (size_t j = 0; j < jobs.size(); ++j)
          if (jobs[j].problem == problems[pi] &&
              jobs[j].method == methods[mi])
            vals.push_back(histories[j][t].avd);
        rows.push_back({static_cast<double>(pi), static_cast<double>(mi),
                        static_cast<double>(t), median_of(vals),
                        quantile_of(vals, 0.25), quantile_of(vals, 0.75)});
      }
    }
  }
  Matrix m(rows.size(), 6);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < 6; ++c) m(r, c) = rows[r][c];
  write_csv(out + "/aggregate.csv", header, m);
  std::printf("aggregate written to %s/aggregate.csv\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust multi-objective Bayesian optimization toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto* run = app.add_subcommand("run", "Execute one optimization run");
  run->add_option("--problem", cfg.problem, "Benchmark problem name")
      ->required();
  run->add_option("--method", cfg.method, "rmobo | mobo | ea-gp-os");
  run->add_option("--acq", cfg.acquisition, "ehvi | qehvi");
  run->add_option("--q", cfg.q, "Batch size");
  run->add_option("--iters", cfg.n_iter, "Number of iterations")->required();
  run->add_option("--seed", cfg.seed, "Master seed");
  run->add_option("--out", cfg.out_dir, "Output directory");
  run->add_option("--n-initial", cfg.n_initial, "Initial design size (0 = 5d)");
  run->add_option("--n-ke", cfg.n_ke, "Kernel-expectation MC samples");
  run->add_option("--eps", cfg.eps, "Duplicate/boundary threshold");
  run->add_option("--threads", cfg.threads, "Worker threads");

  std::string rf_problem, rf_out = ".";
  ReferenceFrontConfig rf_cfg;
  auto* rf = app.add_subcommand("reference-front",
                                "Generate and cache a reference front");
  rf->add_option("--problem", rf_problem)->required();
  rf->add_option("--seed", rf_cfg.seed);
  rf->add_option("--out", rf_out)->required();
  rf->add_option("--pop", rf_cfg.population);
  rf->add_option("--gens", rf_cfg.generations);
  rf->add_option("--n-mc", rf_cfg.n_mc);

  std::string sc_run, sc_ref;
  bool sc_final = false;
  auto* sc = app.add_subcommand("score", "AVD history of a saved run");
  sc->add_option("--run", sc_run)->required();
  sc->add_option("--reference", sc_ref)->required();
  sc->add_flag("--final-only", sc_final);

  std::string suite_cfg;
  auto* su = app.add_subcommand("suite", "Run the full benchmark protocol");
  su->add_option("--config", suite_cfg)->required();

  std::string p1_problem;
  Eigen::Index p1_grid = 0, p1_mc = 0;
  auto* p1 = app.add_subcommand("check-prop1",
                                "Empirical distinct-robust-front check");
  p1->add_option("--problem", p1_problem)->required();
  p1->add_option("--grid", p1_grid, "Grid resolution per dimension");
  p1->add_option("--n-mc", p1_mc, "MC samples for the Bayes risk");

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(cfg);
    if (rf->parsed()) return cmd_reference_front(rf_problem, rf_cfg, rf_out);
    if (sc->parsed()) return cmd_score(sc_run, sc_ref, sc_final);
    if (su->parsed()) return cmd_suite(suite_cfg);
    if (p1->parsed()) return cmd_check_prop1(p1_problem, p1_grid, p1_mc);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
