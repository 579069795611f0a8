#include "locdyn/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "locdyn/errors.hpp"

namespace locdyn {

SolverStepResult static_solve(const MeasurementSet& meas,
                              const NetworkGraph& graph,
                              const StaticConfig& config) {
  const int n = graph.n;
  const int p = graph.p;

  int max_vis = 0;
  for (const auto& vis : graph.visibility)
    max_vis = std::max(max_vis, static_cast<int>(vis.size()));
  double graph_term = 0.0;
  if (graph.edge_count() > 0) {
    if (config.bound == LipschitzBound::spectral) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          incidence_and_laplacian(graph).laplacian);
      graph_term = es.eigenvalues().maxCoeff();
    } else {
      graph_term =
          2.0 * *std::max_element(graph.degree.begin(), graph.degree.end());
    }
  }
  const double L = graph_term + max_vis;

  // anchor centroid init
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(p);
  if (!graph.anchors.empty()) {
    for (const auto& a : graph.anchors) centroid += a;
    centroid /= static_cast<double>(graph.anchors.size());
  }
  Eigen::VectorXd x(n * p);
  for (int i = 0; i < n; ++i) x.segment(i * p, p) = centroid;

  SolverStepResult res;
  if (L <= 0.0) {  // no measurements pin anything
    res.x_hat = x;
    return res;
  }

  const double step = 1.0 / L;
  const double denom = std::sqrt(static_cast<double>(n) * p);
  Eigen::VectorXd x_prev = x;
  double t = 1.0;
  for (int kappa = 1; kappa <= config.max_iters; ++kappa) {
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    const double beta = (t - 1.0) / t_next;
    t = t_next;
    const Eigen::VectorXd w = x + beta * (x - x_prev);
    const Eigen::VectorXd grad = fhat_grad(w, meas, graph);
    res.grad_rms = grad.norm() / denom;
    if (res.grad_rms <= config.grad_tolerance) {
      res.iterations = kappa - 1;
      res.x_hat = w;
      return res;
    }
    x_prev = x;
    x = w - step * grad;
    if (!x.allFinite()) throw NumericalDivergence("static solver diverged");
    res.iterations = kappa;
  }
  res.x_hat = x;
  return res;
}

EstimateHistory run_static(const Scenario& scenario,
                           const std::vector<MeasurementSet>& measurements,
                           const StaticConfig& config) {
  EstimateHistory hist;
  for (const auto& meas : measurements) {
    const NetworkGraph graph_k = scenario.anchor_track.empty()
                                     ? scenario.graph
                                     : scenario.graph_at(meas.step);
    SolverStepResult step = static_solve(meas, graph_k, config);
    hist.estimates.push_back(step.x_hat);
    hist.predictions.push_back(step.x_hat);
    hist.iterations.push_back(step.iterations);
    hist.grad_rms.push_back(step.grad_rms);
  }
  return hist;
}

KalmanState kalman_init(const NetworkGraph& graph,
                        const Eigen::VectorXd& start_positions,
                        const KalmanConfig& config) {
  const int p = graph.p;
  KalmanState st;
  for (int i = 0; i < graph.n; ++i) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(2 * p);
    s.head(p) = start_positions.segment(i * p, p);
    st.state.push_back(s);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(2 * p, 2 * p);
    P.topLeftCorner(p, p) =
        config.initial_pos_var * Eigen::MatrixXd::Identity(p, p);
    P.bottomRightCorner(p, p) =
        config.initial_vel_var * Eigen::MatrixXd::Identity(p, p);
    st.covariance.push_back(P);
  }
  return st;
}

namespace {

void check_psd(const Eigen::MatrixXd& P) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw CovarianceNotPSD("covariance lost positive semidefiniteness");
}

// Scalar-range EKF update in Joseph form.
void range_update(Eigen::VectorXd& s, Eigen::MatrixXd& P,
                  const Eigen::VectorXd& landmark, double measured,
                  double variance, int p) {
  const Eigen::VectorXd diff = s.head(p) - landmark;
  const double dist = diff.norm();
  if (dist < 1e-9) return;  // gradient undefined at the landmark
  Eigen::RowVectorXd H = Eigen::RowVectorXd::Zero(2 * p);
  H.head(p) = diff.transpose() / dist;
  const double innovation = measured - dist;
  const double S = (H * P * H.transpose())(0, 0) + variance;
  const Eigen::VectorXd K = P * H.transpose() / S;
  s += K * innovation;
  const Eigen::MatrixXd IKH =
      Eigen::MatrixXd::Identity(2 * p, 2 * p) - K * H;
  P = IKH * P * IKH.transpose() + K * variance * K.transpose();
  P = 0.5 * (P + P.transpose());
}

}  // namespace

Eigen::VectorXd kalman_step(KalmanState& state, const MeasurementSet& meas,
                            const NetworkGraph& graph, double dt,
                            const KalmanConfig& config) {
  const int n = graph.n;
  const int p = graph.p;
  const double var = config.sigma * config.sigma;

  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(2 * p, 2 * p);
  F.topRightCorner(p, p) = dt * Eigen::MatrixXd::Identity(p, p);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  const double q = config.process_noise;
  Q.topLeftCorner(p, p) =
      q * dt * dt * dt / 3.0 * Eigen::MatrixXd::Identity(p, p);
  Q.topRightCorner(p, p) = q * dt * dt / 2.0 * Eigen::MatrixXd::Identity(p, p);
  Q.bottomLeftCorner(p, p) = Q.topRightCorner(p, p);
  Q.bottomRightCorner(p, p) = q * dt * Eigen::MatrixXd::Identity(p, p);

  // predict
  std::vector<Eigen::VectorXd> predicted_pos(n);
  for (int i = 0; i < n; ++i) {
    state.state[i] = F * state.state[i];
    state.covariance[i] = F * state.covariance[i] * F.transpose() + Q;
    predicted_pos[i] = state.state[i].head(p);
  }

  // update: anchor ranges, then inter-node ranges linearized about the
  // neighbors' predicted positions (frozen for this step)
  for (int i = 0; i < n; ++i) {
    for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
      const int a = graph.visibility[i][v];
      range_update(state.state[i], state.covariance[i], graph.anchors[a],
                   meas.r[i][v], var, p);
    }
    for (int j : graph.neighbors[i]) {
      range_update(state.state[i], state.covariance[i], predicted_pos[j],
                   meas.d[graph.edge_index(i, j)], 2.0 * var, p);
    }
    check_psd(state.covariance[i]);
  }

  Eigen::VectorXd out(n * p);
  for (int i = 0; i < n; ++i) out.segment(i * p, p) = state.state[i].head(p);
  return out;
}

EstimateHistory run_kalman(const Scenario& scenario,
                           const std::vector<MeasurementSet>& measurements,
                           const KalmanConfig& config,
                           const Eigen::VectorXd& start) {
  KalmanState st = kalman_init(scenario.graph, start, config);
  EstimateHistory hist;
  for (const auto& meas : measurements) {
    const NetworkGraph graph_k = scenario.anchor_track.empty()
                                     ? scenario.graph
                                     : scenario.graph_at(meas.step);
    const Eigen::VectorXd est =
        kalman_step(st, meas, graph_k, scenario.dt, config);
    hist.estimates.push_back(est);
    hist.predictions.push_back(est);
    hist.iterations.push_back(1);
    hist.grad_rms.push_back(0.0);
  }
  return hist;
}

}  // namespace locdyn
