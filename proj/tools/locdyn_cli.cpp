// Command-line front end: scenario generation, single runs, Monte-Carlo
// benchmarks, CDF summaries and lambda sweeps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "locdyn/baselines.hpp"
#include "locdyn/errors.hpp"
#include "locdyn/harness.hpp"
#include "locdyn/solver.hpp"
#include "locdyn/trajectory.hpp"

using namespace locdyn;

namespace {

Scenario scenario_by_kind(const std::string& kind) {
  if (kind == "lap") return gen_lap({});
  if (kind == "spiral") return gen_spiral({});
  if (kind == "lawnmower") return gen_lawnmower({});
  throw InvalidParams("unknown scenario kind: " + kind);
}

void write_estimates_csv(const std::string& path, const Scenario& scenario,
                         const std::string& algo, const EstimateHistory& hist,
                         int trial = 0) {
  std::ofstream out(path);
  out.precision(17);
  const int p = scenario.graph.p;
  out << "trial,algorithm,step,node,";
  out << (p == 3 ? "x,y,z" : "x,y");
  out << ",iterations,grad_rms,error\n";
  for (int k = 0; k < scenario.K; ++k) {
    const double err = (hist.estimates[k] - scenario.truth[k]).norm();
    for (int i = 0; i < scenario.graph.n; ++i) {
      out << trial << "," << algo << "," << k << "," << i;
      for (int d = 0; d < p; ++d)
        out << "," << hist.estimates[k](i * p + d);
      out << "," << hist.iterations[k] << "," << hist.grad_rms[k] << "," << err
          << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics-aware range-only network localization"};
  app.require_subcommand(1);

  // scenario gen
  auto* scenario_cmd = app.add_subcommand("scenario", "Scenario tools");
  auto* gen = scenario_cmd->add_subcommand("gen", "Generate a scenario");
  std::string kind = "lap", out_dir = "scenario_out";
  gen->add_option("--kind", kind, "lap|spiral|lawnmower");
  gen->add_option("--out", out_dir, "output directory")->required();

  // solve: one run from a scenario directory
  auto* solve = app.add_subcommand("solve", "Run LocDyn on a stored scenario");
  std::string scenario_path;
  double lambda = 0.5, sigma = 1.0;
  std::uint64_t seed = 1;
  std::string solve_out = "estimates.csv";
  solve->add_option("--scenario", scenario_path, "scenario directory")
      ->required();
  solve->add_option("--lambda", lambda, "regularization weight");
  solve->add_option("--sigma", sigma, "range noise std, meters");
  solve->add_option("--seed", seed, "RNG seed");
  solve->add_option("--out", solve_out, "estimate log CSV");

  // simulate: one run with logs, scenario by kind
  auto* simulate = app.add_subcommand("simulate", "One run with full logs");
  std::string sim_kind = "lap", sim_algo = "locdyn", sim_out = "sim_out";
  double sim_sigma = 1.0, sim_lambda = 0.5, sim_outlier = 0.0;
  std::uint64_t sim_seed = 1;
  simulate->add_option("--scenario", sim_kind, "lap|spiral|lawnmower");
  simulate->add_option("--algorithm", sim_algo, "locdyn|static|kalman");
  simulate->add_option("--sigma", sim_sigma, "range noise std");
  simulate->add_option("--lambda", sim_lambda, "regularization weight");
  simulate->add_option("--outlier-prob", sim_outlier, "doubling probability");
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--out", sim_out, "output directory");

  // benchmark: Monte Carlo
  auto* bench = app.add_subcommand("benchmark", "Monte-Carlo comparison");
  std::string bench_kind = "lap", bench_out = "bench_out", bench_config;
  std::vector<std::string> bench_algos{"locdyn", "static"};
  int trials = 100;
  double bench_sigma = 1.0, bench_lambda = 0.5, bench_outlier = 0.0;
  std::uint64_t bench_seed = 1;
  bool per_node = false, bench_log_estimates = false;
  bench->add_option("--scenario", bench_kind, "lap|spiral|lawnmower");
  bench->add_option("--trials", trials, "number of Monte-Carlo trials");
  bench->add_option("--sigma", bench_sigma, "range noise std");
  bench->add_option("--lambda", bench_lambda, "regularization weight");
  bench->add_option("--outlier-prob", bench_outlier, "doubling probability");
  bench->add_option("--seed", bench_seed, "base RNG seed");
  bench->add_option("--algorithms", bench_algos, "algorithms to compare");
  bench->add_flag("--per-node-metric", per_node,
                  "average per-node error norms instead of the stacked norm");
  bench->add_flag("--log-estimates", bench_log_estimates,
                  "also write per-step estimates.csv");
  bench->add_option("--out", bench_out, "output directory");
  bench->add_option("--config", bench_config,
                    "JSON config file (overrides other flags)");

  // cdf: summarize an existing summary.csv
  auto* cdf_cmd = app.add_subcommand("cdf", "Empirical CDFs from summary.csv");
  std::string cdf_in, cdf_out_dir = ".";
  cdf_cmd->add_option("input", cdf_in, "summary.csv path")->required();
  cdf_cmd->add_option("--out", cdf_out_dir, "output directory");

  // sweep: lambda sweep
  auto* sweep = app.add_subcommand("sweep", "Benchmark over a lambda list");
  std::vector<double> sweep_lambdas{0.01, 0.1, 0.5, 1.0, 10.0};
  std::string sweep_kind = "lap", sweep_out = "sweep_out";
  int sweep_trials = 20;
  double sweep_sigma = 1.0;
  std::uint64_t sweep_seed = 1;
  sweep->add_option("--lambda", sweep_lambdas, "lambda values");
  sweep->add_option("--scenario", sweep_kind, "lap|spiral|lawnmower");
  sweep->add_option("--trials", sweep_trials, "trials per lambda");
  sweep->add_option("--sigma", sweep_sigma, "range noise std");
  sweep->add_option("--seed", sweep_seed, "base RNG seed");
  sweep->add_option("--out", sweep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) {
      write_scenario(scenario_by_kind(kind), out_dir);
      std::cout << "scenario written to " << out_dir << "\n";
    } else if (solve->parsed()) {
      Scenario sc = read_scenario(scenario_path);
      SolverConfig cfg;
      cfg.lambda = lambda;
      EstimateHistory hist = run_trajectory(sc, sigma, 0.0, cfg, seed);
      write_estimates_csv(solve_out, sc, "locdyn", hist);
      std::cout << "error " << trajectory_error(hist, sc.truth) << " m, log in "
                << solve_out << "\n";
    } else if (simulate->parsed()) {
      Scenario sc = scenario_by_kind(sim_kind);
      const auto meas =
          simulate_measurements(sc, sim_sigma, sim_outlier, sim_seed);
      EstimateHistory hist;
      if (sim_algo == "locdyn") {
        SolverConfig cfg;
        cfg.lambda = sim_lambda;
        hist = run_locdyn(sc, meas, cfg, sc.truth.front(), sim_seed);
      } else if (sim_algo == "static") {
        hist = run_static(sc, meas);
      } else if (sim_algo == "kalman") {
        KalmanConfig kc;
        kc.sigma = sim_sigma;
        hist = run_kalman(sc, meas, kc, sc.truth.front());
      } else {
        throw InvalidParams("unknown algorithm: " + sim_algo);
      }
      std::filesystem::create_directories(sim_out);
      write_estimates_csv(
          (std::filesystem::path(sim_out) / "estimates.csv").string(), sc,
          sim_algo, hist);
      write_measurements_csv(
          (std::filesystem::path(sim_out) / "measurements.csv").string(), meas,
          sc.graph);
      std::cout << "error " << trajectory_error(hist, sc.truth)
                << " m, logs in " << sim_out << "\n";
    } else if (bench->parsed()) {
      ExperimentConfig cfg;
      if (!bench_config.empty()) {
        cfg = ExperimentConfig::from_json_file(bench_config);
        if (cfg.out_dir.empty()) cfg.out_dir = bench_out;
      } else {
        cfg.scenario_kind = bench_kind;
        cfg.trials = trials;
        cfg.sigma = bench_sigma;
        cfg.outlier_prob = bench_outlier;
        cfg.seed = bench_seed;
        cfg.algorithms = bench_algos;
        cfg.solver.lambda = bench_lambda;
        cfg.per_node_metric = per_node;
        cfg.log_estimates = bench_log_estimates;
        cfg.out_dir = bench_out;
      }
      if (bench_log_estimates) cfg.log_estimates = true;
      ResultSummary summary = run_monte_carlo(cfg);
      write_results(summary);
      for (const auto& [algo, s] : summary.per_algorithm)
        std::cout << algo << ": mean " << s.mean << " m, var " << s.variance
                  << "\n";
      std::cout << "results in " << cfg.out_dir << "\n";
    } else if (cdf_cmd->parsed()) {
      std::ifstream in(cdf_in);
      if (!in) throw std::runtime_error("cannot open " + cdf_in);
      std::map<std::string, std::vector<double>> errors;
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string algo, trial, err;
        std::getline(ss, algo, ',');
        std::getline(ss, trial, ',');
        std::getline(ss, err, ',');
        errors[algo].push_back(std::stod(err));
      }
      std::filesystem::create_directories(cdf_out_dir);
      for (const auto& [algo, errs] : errors) {
        std::ofstream out(std::filesystem::path(cdf_out_dir) /
                          ("cdf_" + algo + ".csv"));
        out.precision(17);
        out << "value,fraction\n";
        for (auto [v, f] : empirical_cdf(errs)) out << v << "," << f << "\n";
      }
      std::cout << "CDFs written to " << cdf_out_dir << "\n";
    } else if (sweep->parsed()) {
      std::filesystem::create_directories(sweep_out);
      std::ofstream out(std::filesystem::path(sweep_out) / "sweep.csv");
      out.precision(17);
      out << "lambda,algorithm,mean,variance\n";
      for (double lam : sweep_lambdas) {
        ExperimentConfig cfg;
        cfg.scenario_kind = sweep_kind;
        cfg.trials = sweep_trials;
        cfg.sigma = sweep_sigma;
        cfg.seed = sweep_seed;
        cfg.solver.lambda = lam;
        ResultSummary summary = run_monte_carlo(cfg);
        for (const auto& [algo, s] : summary.per_algorithm)
          out << lam << "," << algo << "," << s.mean << "," << s.variance
              << "\n";
        std::cout << "lambda " << lam << " done\n";
      }
      std::cout << "sweep written to " << sweep_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
