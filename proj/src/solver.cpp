#include "locdyn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "locdyn/errors.hpp"
#include "locdyn/rng.hpp"

namespace locdyn {

Eigen::VectorXd predict(const Eigen::VectorXd& x_prev,
                        const Eigen::VectorXd& vdt) {
  if (x_prev.size() != vdt.size())
    throw DimensionMismatch("prediction shape mismatch");
  return x_prev + vdt;
}

Eigen::VectorXd node_gradient(
    int i, const Eigen::VectorXd& w_i,
    const std::function<const Eigen::VectorXd&(int)>& neighbor_w,
    const MeasurementSet& meas, const NetworkGraph& graph, double lambda,
    const Eigen::VectorXd& x_pred_i) {
  const int p = graph.p;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd acc = static_cast<double>(graph.degree[i]) * w_i;
  for (int j : graph.neighbors[i]) {
    const Eigen::VectorXd& w_j = neighbor_w(j);
    if (w_j.size() != p) throw MissingNeighborValue("neighbor value missing");
    acc -= w_j;
    const Eigen::VectorXd u = w_i - w_j;
    acc -= project_ball(u, zero, meas.d[graph.edge_index(i, j)]);
  }
  for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
    const int a = graph.visibility[i][v];
    acc += w_i - project_ball(w_i, graph.anchors[a], meas.r[i][v]);
  }
  acc += 2.0 * lambda * (w_i - x_pred_i);
  return acc;
}

namespace {

// Shared Nesterov loop. `deliver` is called once per (sender, receiver)
// pair per iteration before gradients are evaluated; `fetch` supplies
// neighbor values to node_gradient. The centralized path uses direct
// array reads, the traced path goes through mailboxes; the arithmetic
// is identical either way.
template <typename Deliver, typename Fetch>
SolverStepResult nesterov_loop(const MeasurementSet& meas,
                               const Eigen::VectorXd& x_pred,
                               const Eigen::VectorXd& x_init,
                               const SolverConfig& config,
                               const ConvexConstants& constants,
                               const NetworkGraph& graph, Deliver&& deliver,
                               Fetch&& fetch) {
  const int n = graph.n;
  const int p = graph.p;
  if (x_pred.size() != n * p || x_init.size() != n * p)
    throw DimensionMismatch("solver input shape mismatch");

  const double step = 1.0 / constants.L;
  const double beta = constants.beta;
  const double denom = std::sqrt(static_cast<double>(n) * p);

  std::vector<Eigen::VectorXd> x_prev(n), x_prev2(n), w(n), grad(n);
  for (int i = 0; i < n; ++i) {
    x_prev[i] = x_init.segment(i * p, p);
    x_prev2[i] = x_prev[i];
  }

  SolverStepResult res;
  res.grad_rms = std::numeric_limits<double>::infinity();
  for (int kappa = 1; kappa <= config.max_iters; ++kappa) {
    for (int i = 0; i < n; ++i)
      w[i] = x_prev[i] + beta * (x_prev[i] - x_prev2[i]);

    // broadcast phase
    for (int i = 0; i < n; ++i)
      for (int j : graph.neighbors[i]) deliver(i, j, w[i]);
    res.messages += 2 * graph.edge_count();

    // update phase
    double grad_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      std::function<const Eigen::VectorXd&(int)> access =
          [&](int j) -> const Eigen::VectorXd& { return fetch(i, j); };
      grad[i] = node_gradient(i, w[i], access, meas, graph, config.lambda,
                              x_pred.segment(i * p, p));
      grad_sq += grad[i].squaredNorm();
    }
    res.grad_rms = std::sqrt(grad_sq) / denom;
    if (res.grad_rms <= config.grad_tolerance) {
      // converged at the extrapolated point
      res.iterations = kappa - 1;
      res.x_hat.resize(n * p);
      for (int i = 0; i < n; ++i) res.x_hat.segment(i * p, p) = w[i];
      if (!res.x_hat.allFinite())
        throw NumericalDivergence("non-finite iterate");
      return res;
    }

    for (int i = 0; i < n; ++i) {
      x_prev2[i] = x_prev[i];
      x_prev[i] = w[i] - step * grad[i];
      if (!x_prev[i].allFinite())
        throw NumericalDivergence("non-finite iterate (check L)");
    }
    res.iterations = kappa;

    if (config.record_objective || config.record_iterates) {
      Eigen::VectorXd xk(n * p);
      for (int i = 0; i < n; ++i) xk.segment(i * p, p) = x_prev[i];
      if (config.record_objective)
        res.objective.push_back(
            g_value(xk, x_pred, config.lambda, meas, graph));
      if (config.record_iterates) res.iterates.push_back(xk);
    }
  }

  res.x_hat.resize(n * p);
  for (int i = 0; i < n; ++i) res.x_hat.segment(i * p, p) = x_prev[i];
  if (!res.x_hat.allFinite()) throw NumericalDivergence("non-finite iterate");
  return res;
}

}  // namespace

SolverStepResult solve_step(const MeasurementSet& meas,
                            const Eigen::VectorXd& x_pred,
                            const Eigen::VectorXd& x_init,
                            const SolverConfig& config,
                            const ConvexConstants& constants,
                            const NetworkGraph& graph) {
  // Direct reads of the shared w array stand in for the broadcasts.
  std::vector<const Eigen::VectorXd*> bus(graph.n, nullptr);
  auto deliver = [&](int from, int /*to*/, const Eigen::VectorXd& w_i) {
    bus[from] = &w_i;
  };
  auto fetch = [&](int /*reader*/, int j) -> const Eigen::VectorXd& {
    return *bus[j];
  };
  return nesterov_loop(meas, x_pred, x_init, config, constants, graph, deliver,
                       fetch);
}

TraceResult distributed_round_trace(const MeasurementSet& meas,
                                    const Eigen::VectorXd& x_pred,
                                    const Eigen::VectorXd& x_init,
                                    const SolverConfig& config,
                                    const ConvexConstants& constants,
                                    const NetworkGraph& graph) {
  TraceResult trace;
  // mailboxes[receiver][sender] holds the delivered w value
  std::vector<std::vector<Eigen::VectorXd>> mailboxes(
      graph.n, std::vector<Eigen::VectorXd>(graph.n));
  std::vector<std::vector<bool>> delivered(graph.n,
                                           std::vector<bool>(graph.n, false));
  std::vector<long> sent(graph.n, 0);

  auto deliver = [&](int from, int to, const Eigen::VectorXd& w_i) {
    mailboxes[to][from] = w_i;
    delivered[to][from] = true;
    ++trace.deliveries;
    ++sent[from];
  };
  auto fetch = [&](int reader, int j) -> const Eigen::VectorXd& {
    const auto& nb = graph.neighbors[reader];
    if (!std::binary_search(nb.begin(), nb.end(), j))
      throw ProtocolViolation("node read non-neighbor state");
    if (!delivered[reader][j])
      throw MissingNeighborValue("no delivery from neighbor");
    return mailboxes[reader][j];
  };
  trace.result = nesterov_loop(meas, x_pred, x_init, config, constants, graph,
                               deliver, fetch);
  for (int i = 0; i < graph.n; ++i)
    trace.broadcasts += graph.degree[i] > 0 ? sent[i] / graph.degree[i] : 0;
  return trace;
}

std::vector<MeasurementSet> simulate_measurements(const Scenario& scenario,
                                                  double sigma,
                                                  double outlier_prob,
                                                  std::uint64_t seed) {
  std::vector<MeasurementSet> out;
  out.reserve(scenario.K);
  for (int k = 0; k < scenario.K; ++k) {
    Rng step_rng(Rng::derive(seed, static_cast<std::uint64_t>(k)));
    MeasurementSet m = sample_ranges(scenario, k, sigma, step_rng);
    if (outlier_prob > 0.0 && scenario.outlier_anchor >= 0) {
      Rng outlier_rng(
          Rng::derive(Rng::derive(seed, static_cast<std::uint64_t>(k)), 7ULL));
      m = inject_outliers(m, scenario.graph, outlier_prob,
                          scenario.outlier_anchor, outlier_rng);
    }
    out.push_back(std::move(m));
  }
  return out;
}

EstimateHistory run_locdyn(const Scenario& scenario,
                           const std::vector<MeasurementSet>& measurements,
                           const SolverConfig& config,
                           const Eigen::VectorXd& start, std::uint64_t seed) {
  const NetworkGraph& graph = scenario.graph;
  const int dim = graph.n * graph.p;
  const ConvexConstants constants =
      compute_constants(graph, config.lambda, config.bound);

  // anchor bounding box for the random_box policy
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(graph.p, 1e300);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(graph.p, -1e300);
  for (const auto& a : graph.anchors) {
    lo = lo.cwiseMin(a);
    hi = hi.cwiseMax(a);
  }
  Rng init_rng(Rng::derive(seed, 0xb0bULL));
  auto random_box_point = [&]() {
    Eigen::VectorXd x(dim);
    for (int i = 0; i < graph.n; ++i)
      for (int d = 0; d < graph.p; ++d)
        x(i * graph.p + d) = init_rng.uniform(lo(d), hi(d));
    return x;
  };

  EstimateHistory hist;
  PositionHistory pos_history(16);
  Eigen::VectorXd x_prev = start;

  for (int k = 0; k < scenario.K; ++k) {
    Eigen::VectorXd vdt = Eigen::VectorXd::Zero(dim);
    if (k > 0)
      vdt = estimate_velocity(pos_history, k, config.velocity, dim);
    const Eigen::VectorXd x_pred = predict(x_prev, vdt);
    const Eigen::VectorXd x_init = config.init_policy == InitPolicy::warm_start
                                       ? x_prev
                                       : random_box_point();
    const NetworkGraph graph_k =
        scenario.anchor_track.empty() ? graph : scenario.graph_at(k);
    SolverStepResult step = solve_step(measurements[k], x_pred, x_init, config,
                                       constants, graph_k);
    hist.estimates.push_back(step.x_hat);
    hist.predictions.push_back(x_pred);
    hist.iterations.push_back(step.iterations);
    hist.grad_rms.push_back(step.grad_rms);
    hist.total_messages += step.messages;
    pos_history.push(k, step.x_hat);
    x_prev = step.x_hat;
  }
  return hist;
}

EstimateHistory run_trajectory(const Scenario& scenario, double sigma,
                               double outlier_prob, const SolverConfig& config,
                               std::uint64_t seed) {
  const auto measurements =
      simulate_measurements(scenario, sigma, outlier_prob, seed);
  return run_locdyn(scenario, measurements, config, scenario.truth.front(),
                    seed);
}

}  // namespace locdyn
