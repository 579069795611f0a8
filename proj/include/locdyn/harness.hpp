#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "locdyn/baselines.hpp"
#include "locdyn/solver.hpp"
#include "locdyn/trajectory.hpp"

namespace locdyn {

struct ExperimentConfig {
  std::string scenario_kind = "lap";  // lap | spiral | lawnmower
  std::string scenario_dir;           // nonempty: load instead of generating
  double sigma = 1.0;
  double outlier_prob = 0.0;
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<std::string> algorithms{"locdyn", "static"};
  SolverConfig solver;
  StaticConfig static_solver;
  KalmanConfig kalman;
  bool per_node_metric = false;
  bool log_estimates = false;  // keep per-step estimates, write estimates.csv
  std::string out_dir;

  static ExperimentConfig from_json_file(const std::string& path);
};

struct AlgorithmSummary {
  std::vector<double> errors;  // one per trial
  double mean = 0.0;
  double variance = 0.0;       // unbiased sample variance
};

struct ResultSummary {
  std::map<std::string, AlgorithmSummary> per_algorithm;
  // Per-trial estimate histories, filled only when config.log_estimates.
  std::map<std::string, std::vector<EstimateHistory>> histories;
  ExperimentConfig config;
};

// Mean over steps of the stacked position-error norm. With
// per_node = true, additionally averages per-node norms.
double trajectory_error(const EstimateHistory& est,
                        const std::vector<Eigen::VectorXd>& truth,
                        int node_count = 1, bool per_node = false);

// Collapsed empirical CDF: sorted distinct values with fraction of
// samples <= value; last fraction is 1.
std::vector<std::pair<double, double>> empirical_cdf(
    const std::vector<double>& errors);

// Runs all configured algorithms on identical per-trial measurement
// streams (seed derived per trial from the base seed). Trials run in
// parallel; results are deterministic.
ResultSummary run_monte_carlo(const ExperimentConfig& config);

// Writes summary.csv, cdf_<algo>.csv and run_meta.json to config.out_dir.
void write_results(const ResultSummary& summary);

Scenario make_scenario(const ExperimentConfig& config);

}  // namespace locdyn
