#include "locdyn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "locdyn/errors.hpp"
#include "locdyn/rng.hpp"

namespace locdyn {

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;

  ExperimentConfig c;
  c.scenario_kind = j.value("scenario", c.scenario_kind);
  c.scenario_dir = j.value("scenario_dir", c.scenario_dir);
  c.sigma = j.value("sigma", c.sigma);
  c.outlier_prob = j.value("outlier_prob", c.outlier_prob);
  c.trials = j.value("trials", c.trials);
  c.seed = j.value("seed", c.seed);
  if (j.contains("algorithms"))
    c.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  c.solver.lambda = j.value("lambda", c.solver.lambda);
  c.solver.max_iters = j.value("max_iters", c.solver.max_iters);
  c.solver.grad_tolerance = j.value("grad_tolerance", c.solver.grad_tolerance);
  c.kalman.process_noise = j.value("kalman_process_noise", c.kalman.process_noise);
  c.per_node_metric = j.value("per_node_metric", c.per_node_metric);
  c.log_estimates = j.value("log_estimates", c.log_estimates);
  c.out_dir = j.value("out_dir", c.out_dir);
  return c;
}

double trajectory_error(const EstimateHistory& est,
                        const std::vector<Eigen::VectorXd>& truth,
                        int node_count, bool per_node) {
  if (est.estimates.size() != truth.size())
    throw LengthMismatch("estimate/truth step counts differ");
  if (truth.empty()) throw LengthMismatch("empty trajectory");
  double total = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (est.estimates[k].size() != truth[k].size())
      throw LengthMismatch("estimate/truth dimensions differ");
    if (per_node) {
      const int p = static_cast<int>(truth[k].size()) / node_count;
      double step_sum = 0.0;
      for (int i = 0; i < node_count; ++i)
        step_sum +=
            (est.estimates[k].segment(i * p, p) - truth[k].segment(i * p, p))
                .norm();
      total += step_sum / node_count;
    } else {
      total += (est.estimates[k] - truth[k]).norm();
    }
  }
  return total / static_cast<double>(truth.size());
}

std::vector<std::pair<double, double>> empirical_cdf(
    const std::vector<double>& errors) {
  if (errors.empty()) throw EmptyInput("empirical_cdf of empty list");
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> cdf;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double frac = static_cast<double>(i + 1) / n;
    if (!cdf.empty() && cdf.back().first == sorted[i])
      cdf.back().second = frac;  // collapse ties to the upper fraction
    else
      cdf.emplace_back(sorted[i], frac);
  }
  return cdf;
}

Scenario make_scenario(const ExperimentConfig& config) {
  if (!config.scenario_dir.empty()) return read_scenario(config.scenario_dir);
  if (config.scenario_kind == "lap") return gen_lap({});
  if (config.scenario_kind == "spiral") return gen_spiral({});
  if (config.scenario_kind == "lawnmower") return gen_lawnmower({});
  throw InvalidParams("unknown scenario kind: " + config.scenario_kind);
}

ResultSummary run_monte_carlo(const ExperimentConfig& config) {
  if (config.trials < 1) throw InvalidParams("trials must be >= 1");
  if (config.algorithms.empty()) throw InvalidParams("no algorithms selected");

  const Scenario scenario = make_scenario(config);
  KalmanConfig kalman = config.kalman;
  kalman.sigma = config.sigma > 0 ? config.sigma : kalman.sigma;

  ResultSummary summary;
  summary.config = config;
  for (const auto& algo : config.algorithms) {
    summary.per_algorithm[algo].errors.resize(config.trials);
    if (config.log_estimates) summary.histories[algo].resize(config.trials);
  }

  auto run_trial = [&](int trial) {
    const std::uint64_t trial_seed =
        Rng::derive(config.seed, static_cast<std::uint64_t>(trial));
    const auto measurements = simulate_measurements(
        scenario, config.sigma, config.outlier_prob, trial_seed);
    for (const auto& algo : config.algorithms) {
      EstimateHistory hist;
      if (algo == "locdyn") {
        hist = run_locdyn(scenario, measurements, config.solver,
                          scenario.truth.front(), trial_seed);
      } else if (algo == "static") {
        hist = run_static(scenario, measurements, config.static_solver);
      } else if (algo == "kalman") {
        hist = run_kalman(scenario, measurements, kalman,
                          scenario.truth.front());
      } else {
        throw InvalidParams("unknown algorithm: " + algo);
      }
      summary.per_algorithm[algo].errors[trial] = trajectory_error(
          hist, scenario.truth, scenario.graph.n, config.per_node_metric);
      if (config.log_estimates)
        summary.histories[algo][trial] = std::move(hist);
    }
  };

  const unsigned workers =
      std::min<unsigned>(std::thread::hardware_concurrency(),
                         static_cast<unsigned>(config.trials));
  if (workers <= 1) {
    for (int t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int t = next.fetch_add(1); t < config.trials;
               t = next.fetch_add(1))
            run_trial(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (auto& [algo, s] : summary.per_algorithm) {
    double sum = 0.0;
    for (double e : s.errors) sum += e;
    s.mean = sum / s.errors.size();
    double sq = 0.0;
    for (double e : s.errors) sq += (e - s.mean) * (e - s.mean);
    s.variance = s.errors.size() > 1 ? sq / (s.errors.size() - 1) : 0.0;
  }
  return summary;
}

void write_results(const ResultSummary& summary) {
  const auto& config = summary.config;
  if (config.out_dir.empty()) return;
  std::filesystem::create_directories(config.out_dir);
  const std::filesystem::path dir(config.out_dir);

  std::ofstream sum(dir / "summary.csv");
  sum.precision(17);
  sum << "algorithm,trial,error\n";
  for (const auto& [algo, s] : summary.per_algorithm)
    for (std::size_t t = 0; t < s.errors.size(); ++t)
      sum << algo << "," << t << "," << s.errors[t] << "\n";

  for (const auto& [algo, s] : summary.per_algorithm) {
    std::ofstream cdf(dir / ("cdf_" + algo + ".csv"));
    cdf.precision(17);
    cdf << "value,fraction\n";
    for (auto [v, f] : empirical_cdf(s.errors))
      cdf << v << "," << f << "\n";
  }

  if (!summary.histories.empty()) {
    const Scenario scenario = make_scenario(config);
    const int p = scenario.graph.p;
    std::ofstream est(dir / "estimates.csv");
    est.precision(17);
    est << "trial,algorithm,step,node";
    for (int d = 0; d < p; ++d) est << "," << "xyz"[d];
    est << ",error\n";
    for (const auto& [algo, trials] : summary.histories) {
      for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& hist = trials[t];
        for (std::size_t k = 0; k < hist.estimates.size(); ++k) {
          for (int i = 0; i < scenario.graph.n; ++i) {
            const Eigen::VectorXd xi = hist.estimates[k].segment(i * p, p);
            const double err =
                (xi - scenario.truth[k].segment(i * p, p)).norm();
            est << t << "," << algo << "," << k << "," << i;
            for (int d = 0; d < p; ++d) est << "," << xi(d);
            est << "," << err << "\n";
          }
        }
      }
    }
  }

  nlohmann::json meta;
  meta["scenario"] = config.scenario_kind;
  meta["scenario_dir"] = config.scenario_dir;
  meta["sigma"] = config.sigma;
  meta["outlier_prob"] = config.outlier_prob;
  meta["trials"] = config.trials;
  meta["seed"] = config.seed;
  meta["algorithms"] = config.algorithms;
  meta["lambda"] = config.solver.lambda;
  meta["max_iters"] = config.solver.max_iters;
  meta["grad_tolerance"] = config.solver.grad_tolerance;
  meta["per_node_metric"] = config.per_node_metric;
  for (const auto& [algo, s] : summary.per_algorithm) {
    meta["results"][algo]["mean"] = s.mean;
    meta["results"][algo]["variance"] = s.variance;
  }
  std::ofstream(dir / "run_meta.json") << meta.dump(2) << "\n";
}

}  // namespace locdyn
