// Acceptance suite: end-to-end checks of the estimator against the
// benchmark protocol. Prints one PASS/FAIL line per criterion; exit
// code is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "locdyn/baselines.hpp"
#include "locdyn/errors.hpp"
#include "locdyn/harness.hpp"
#include "locdyn/solver.hpp"

using namespace locdyn;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double idx = q * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double w = idx - lo;
  return (1.0 - w) * values[lo] + w * values[hi];
}

// --- 1: spiral accuracy gain -------------------------------------------
void criterion_spiral_gain() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig cfg;
  cfg.scenario_kind = "spiral";
  cfg.sigma = 1.0;
  cfg.trials = 100;
  cfg.seed = 1001;
  cfg.algorithms = {"locdyn", "static"};
  auto summary = run_monte_carlo(cfg);
  const double gain = summary.per_algorithm.at("static").mean -
                      summary.per_algorithm.at("locdyn").mean;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  report(1, "spiral accuracy gain >= 0.15 m", gain >= 0.15,
         "gain " + fmt(gain) + " m, " + fmt(secs) + " s");
}

// --- 2: lap CDF ordering at every decile --------------------------------
void criterion_lap_ordering() {
  ExperimentConfig cfg;
  cfg.scenario_kind = "lap";
  cfg.sigma = 1.0;
  cfg.trials = 100;
  cfg.seed = 1002;
  cfg.algorithms = {"locdyn", "static", "kalman"};
  auto summary = run_monte_carlo(cfg);
  const auto& ld = summary.per_algorithm.at("locdyn").errors;
  const auto& st = summary.per_algorithm.at("static").errors;
  bool pass = true;
  std::string worst;
  for (int d = 1; d <= 9; ++d) {
    const double q = d / 10.0;
    const double lq = quantile(ld, q);
    const double sq = quantile(st, q);
    if (lq >= sq) {
      pass = false;
      worst = "decile " + std::to_string(d) + ": locdyn " + fmt(lq) +
              " vs static " + fmt(sq);
    }
  }
  std::string detail = "medians: locdyn " + fmt(quantile(ld, 0.5)) +
                       ", static " + fmt(quantile(st, 0.5)) + ", kalman " +
                       fmt(quantile(summary.per_algorithm.at("kalman").errors,
                                    0.5)) +
                       " (kalman reported, not gated)";
  if (!pass) detail += "; " + worst;
  report(2, "lap: locdyn CDF left of static at deciles 10%..90%", pass,
         detail);
}

// --- 3: outlier robustness ----------------------------------------------
void criterion_outlier_robustness() {
  ExperimentConfig cfg;
  cfg.scenario_kind = "lawnmower";
  cfg.sigma = 1.0;
  cfg.outlier_prob = 0.01;
  cfg.trials = 100;
  cfg.seed = 1003;
  cfg.algorithms = {"locdyn", "static"};
  auto summary = run_monte_carlo(cfg);
  const auto& ld = summary.per_algorithm.at("locdyn");
  const auto& st = summary.per_algorithm.at("static");
  const bool pass = ld.mean < st.mean && ld.variance < st.variance;
  report(3, "lawnmower outliers: locdyn mean and variance below static", pass,
         "mean " + fmt(ld.mean) + " vs " + fmt(st.mean) + ", var " +
             fmt(ld.variance) + " vs " + fmt(st.variance));
}

// --- 4: convergence bound ------------------------------------------------
void criterion_convergence_bound() {
  Rng rng(2026);
  bool pass = true;
  std::string detail = "20 instances x 400 iterations";
  for (int inst = 0; inst < 20 && pass; ++inst) {
    // random connected graph, 3..5 nodes, random measurements
    const int n = 3 + static_cast<int>(rng.uniform() * 3);
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < n; ++i)
      edges.emplace_back(static_cast<int>(rng.uniform() * i), i);
    for (int e = 0; e < n; ++e) {
      int i = static_cast<int>(rng.uniform() * n);
      int j = static_cast<int>(rng.uniform() * n);
      if (i != j) edges.emplace_back(i, j);
    }
    std::vector<Eigen::VectorXd> anchors;
    for (int a = 0; a < 4; ++a) {
      Eigen::VectorXd pt(2);
      pt << rng.uniform(-20, 20), rng.uniform(-20, 20);
      anchors.push_back(pt);
    }
    std::vector<std::vector<int>> vis(n, {0, 1, 2, 3});
    auto graph = build_network(n, 2, edges, anchors, vis);

    MeasurementSet meas;
    meas.d.resize(graph.edge_count());
    for (auto& d : meas.d) d = rng.uniform(1.0, 20.0);
    meas.r.resize(n);
    meas.outlier.resize(n);
    for (int i = 0; i < n; ++i) {
      meas.r[i].resize(4);
      meas.outlier[i].assign(4, false);
      for (auto& r : meas.r[i]) r = rng.uniform(1.0, 25.0);
    }

    SolverConfig cfg;
    cfg.lambda = rng.uniform(0.1, 2.0);
    const ConvexConstants c = compute_constants(graph, cfg.lambda);
    Eigen::VectorXd x_pred(n * 2), init(n * 2);
    for (int i = 0; i < n * 2; ++i) {
      x_pred(i) = rng.uniform(-20, 20);
      init(i) = rng.uniform(-20, 20);
    }

    SolverConfig ref_cfg = cfg;
    ref_cfg.max_iters = 100000;
    ref_cfg.grad_tolerance = 0.0;
    auto ref = solve_step(meas, x_pred, init, ref_cfg, c, graph);
    const Eigen::VectorXd x_star = ref.x_hat;
    const double g_star = g_value(x_star, x_pred, cfg.lambda, meas, graph);

    SolverConfig rec = cfg;
    rec.max_iters = 400;
    rec.grad_tolerance = 0.0;
    rec.record_objective = true;
    auto run = solve_step(meas, x_pred, init, rec, c, graph);
    const double g0 = g_value(init, x_pred, cfg.lambda, meas, graph);
    const double numerator =
        g0 - g_star + c.m / 2.0 * (init - x_star).squaredNorm();
    for (std::size_t kappa = 1; kappa <= run.objective.size(); ++kappa) {
      const double rate = 2.0 + kappa * std::sqrt(c.m / c.L);
      const double bound = 4.0 / (rate * rate) * numerator;
      if (run.objective[kappa - 1] - g_star > bound + 1e-9) {
        pass = false;
        detail = "violated at instance " + std::to_string(inst) +
                 ", iteration " + std::to_string(kappa);
        break;
      }
    }
  }
  report(4, "Nesterov convergence bound on 20 random instances", pass, detail);
}

// --- 5: gradient vs finite differences -----------------------------------
void criterion_gradient_fd() {
  Rng rng(2027);
  auto scenario = gen_lap({});
  const auto& graph = scenario.graph;
  Rng meas_rng(1);
  auto meas = sample_ranges(scenario, 10, 1.0, meas_rng);
  const int dim = graph.n * graph.p;
  Eigen::VectorXd x_pred(dim);
  for (int i = 0; i < dim; ++i) x_pred(i) = rng.uniform(-25, 25);
  const double lambda = 0.5;

  int interior_fail = 0, boundary_fail = 0, boundary_count = 0;
  const double h = 1e-6;
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x(i) = rng.uniform(-25, 25);

    // proximity of any edge/anchor displacement to its ball boundary
    double min_gap = 1e300;
    for (int e = 0; e < graph.edge_count(); ++e) {
      auto [i, j] = graph.edges[e];
      const double dist =
          (x.segment(i * 2, 2) - x.segment(j * 2, 2)).norm();
      min_gap = std::min(min_gap, std::abs(dist - meas.d[e]));
    }
    for (int i = 0; i < graph.n; ++i)
      for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
        const double dist =
            (x.segment(i * 2, 2) - graph.anchors[graph.visibility[i][v]])
                .norm();
        min_gap = std::min(min_gap, std::abs(dist - meas.r[i][v]));
      }
    const bool near_boundary = min_gap < 1e-6;

    const Eigen::VectorXd g = g_grad(x, x_pred, lambda, meas, graph);
    Eigen::VectorXd fd(dim);
    Eigen::VectorXd xp = x;
    for (int i = 0; i < dim; ++i) {
      const double orig = xp(i);
      xp(i) = orig + h;
      const double fp = g_value(xp, x_pred, lambda, meas, graph);
      xp(i) = orig - h;
      const double fm = g_value(xp, x_pred, lambda, meas, graph);
      xp(i) = orig;
      fd(i) = (fp - fm) / (2.0 * h);
    }
    const double rel = (g - fd).norm() / std::max(1.0, g.norm());
    if (near_boundary) {
      ++boundary_count;
      if (rel >= 1e-4) ++boundary_fail;
    } else if (rel >= 1e-6) {
      ++interior_fail;
    }
  }
  const bool pass = interior_fail == 0 && boundary_fail == 0;
  report(5, "gradient matches finite differences at 1000 random points", pass,
         "interior failures " + std::to_string(interior_fail) +
             ", boundary failures " + std::to_string(boundary_fail) + "/" +
             std::to_string(boundary_count));
}

// --- 6: L and m inequalities ---------------------------------------------
void criterion_constants() {
  Rng rng(2028);
  auto scenario = gen_lap({});
  const auto& graph = scenario.graph;
  Rng meas_rng(2);
  auto meas = sample_ranges(scenario, 20, 1.0, meas_rng);
  const int dim = graph.n * graph.p;
  const double lambda = 0.5;
  const ConvexConstants c = compute_constants(graph, lambda);
  Eigen::VectorXd x_pred(dim);
  for (int i = 0; i < dim; ++i) x_pred(i) = rng.uniform(-25, 25);

  int smooth_viol = 0, convex_viol = 0;
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd x(dim), y(dim);
    for (int i = 0; i < dim; ++i) {
      x(i) = rng.uniform(-25, 25);
      y(i) = rng.uniform(-25, 25);
    }
    const Eigen::VectorXd gx = g_grad(x, x_pred, lambda, meas, graph);
    const Eigen::VectorXd gy = g_grad(y, x_pred, lambda, meas, graph);
    if ((gx - gy).norm() > c.L * (x - y).norm() * (1.0 + 1e-12))
      ++smooth_viol;
    if ((gx - gy).dot(x - y) < c.m * (x - y).squaredNorm() * (1.0 - 1e-12))
      ++convex_viol;
  }
  report(6, "L-smoothness and m-strong convexity on 1000 random pairs",
         smooth_viol == 0 && convex_viol == 0,
         "smoothness violations " + std::to_string(smooth_viol) +
             ", convexity violations " + std::to_string(convex_viol));
}

// --- 7: distributed equivalence -------------------------------------------
void criterion_distributed() {
  auto scenario = gen_lap({});
  Rng meas_rng(3);
  auto meas = sample_ranges(scenario, 15, 1.0, meas_rng);
  SolverConfig cfg;
  cfg.lambda = 0.5;
  cfg.max_iters = 100;
  cfg.grad_tolerance = 0.0;
  cfg.record_iterates = true;
  const ConvexConstants c = compute_constants(scenario.graph, cfg.lambda);
  const Eigen::VectorXd x_pred = scenario.truth[15];
  const Eigen::VectorXd init = scenario.truth[14];

  auto central = solve_step(meas, x_pred, init, cfg, c, scenario.graph);
  bool identical = true;
  bool protocol_clean = true;
  long deliveries = 0;
  try {
    auto traced =
        distributed_round_trace(meas, x_pred, init, cfg, c, scenario.graph);
    deliveries = traced.deliveries;
    identical = central.iterates.size() == traced.result.iterates.size();
    for (std::size_t k = 0; identical && k < central.iterates.size(); ++k)
      identical = (central.iterates[k] - traced.result.iterates[k]).norm() ==
                  0.0;
    identical = identical &&
                (central.x_hat - traced.result.x_hat).norm() == 0.0;
  } catch (const ProtocolViolation&) {
    protocol_clean = false;
  }
  const long expected = 2L * scenario.graph.edge_count() * cfg.max_iters;
  const bool pass = identical && protocol_clean && deliveries == expected;
  report(7, "distributed trace bitwise-equal, 2|E| deliveries per iteration",
         pass,
         std::string(identical ? "bitwise equal" : "MISMATCH") + ", " +
             std::to_string(deliveries) + "/" + std::to_string(expected) +
             " deliveries, protocol " + (protocol_clean ? "clean" : "violated"));
}

// --- 8: differentiator exactness -------------------------------------------
void criterion_differentiators() {
  bool pass = true;
  std::string detail;

  auto scalar = [](double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
  };

  // exact zero on constants, exact midpoint derivative on degree <= 2
  for (double a : {0.0, 0.7}) {
    for (double b : {0.0, -2.0}) {
      PositionHistory h(64);
      for (int k = 0; k <= 40; ++k)
        h.push(k, scalar(a * k * k + b * k + 3.0));
      for (int k = 8; k <= 40; ++k) {
        const double exact = 2.0 * a * (k - 4) + b;
        if (std::abs(taylor6(h, k)(0) - exact) > 1e-10 ||
            std::abs(smooth_fir(h, k)(0) - exact) > 1e-10) {
          pass = false;
          detail = "polynomial exactness violated";
        }
        if (a == 0.0 && b == 0.0 &&
            (taylor6(h, k)(0) != 0.0 || smooth_fir(h, k)(0) != 0.0)) {
          pass = false;
          detail = "nonzero output on constant input";
        }
      }
    }
  }

  // white-noise variance ratio matches the coefficient-energy ratio
  Rng rng(2029);
  PositionHistory h(20000);
  const int N = 10000;
  for (int k = 0; k < N; ++k) h.push(k, scalar(rng.gaussian()));
  double var_fir = 0.0, var_t6 = 0.0;
  int count = 0;
  for (int k = 8; k < N; ++k) {
    var_fir += smooth_fir(h, k)(0) * smooth_fir(h, k)(0);
    var_t6 += taylor6(h, k)(0) * taylor6(h, k)(0);
    ++count;
  }
  var_fir /= count;
  var_t6 /= count;
  const double expected_ratio = (84.0 / 1024.0) / (4214.0 / 3600.0);
  const double ratio = var_fir / var_t6;
  if (!(var_fir < var_t6) ||
      std::abs(ratio - expected_ratio) > 0.10 * expected_ratio) {
    pass = false;
    detail = "variance ratio " + fmt(ratio) + " vs expected " +
             fmt(expected_ratio);
  }
  if (detail.empty())
    detail = "ratio " + fmt(ratio) + " ~ " + fmt(expected_ratio);
  report(8, "differentiator exactness and noise-gain ordering", pass, detail);
}

// --- 9: reproducibility -----------------------------------------------------
void criterion_reproducibility() {
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  ExperimentConfig cfg;
  cfg.scenario_kind = "lawnmower";
  cfg.trials = 5;
  cfg.sigma = 1.0;
  cfg.outlier_prob = 0.01;
  cfg.seed = 77;
  cfg.algorithms = {"locdyn", "static"};

  cfg.out_dir = "acceptance_rep_a";
  auto a = run_monte_carlo(cfg);
  a.config = cfg;
  write_results(a);
  cfg.out_dir = "acceptance_rep_b";
  auto b = run_monte_carlo(cfg);
  b.config = cfg;
  write_results(b);

  const bool pass =
      slurp("acceptance_rep_a/summary.csv") ==
          slurp("acceptance_rep_b/summary.csv") &&
      slurp("acceptance_rep_a/cdf_locdyn.csv") ==
          slurp("acceptance_rep_b/cdf_locdyn.csv") &&
      slurp("acceptance_rep_a/cdf_static.csv") ==
          slurp("acceptance_rep_b/cdf_static.csv");
  std::filesystem::remove_all("acceptance_rep_a");
  std::filesystem::remove_all("acceptance_rep_b");
  report(9, "identical config + seed gives byte-identical summaries", pass,
         pass ? "byte-identical" : "files differ");
}

}  // namespace

int main() {
  criterion_gradient_fd();
  criterion_constants();
  criterion_differentiators();
  criterion_convergence_bound();
  criterion_distributed();
  criterion_reproducibility();
  criterion_spiral_gain();
  criterion_lap_ordering();
  criterion_outlier_robustness();
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
