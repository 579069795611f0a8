#pragma once

#include <Eigen/Dense>
#include <vector>

#include "locdyn/convex.hpp"
#include "locdyn/measurement.hpp"
#include "locdyn/network.hpp"
#include "locdyn/solver.hpp"
#include "locdyn/trajectory.hpp"

namespace locdyn {

struct StaticConfig {
  int max_iters = 2000;
  double grad_tolerance = 1e-6;  // RMS
  LipschitzBound bound = LipschitzBound::spectral;
};

// One-shot static localization: minimizes fhat alone with plain
// Nesterov momentum (fhat is convex but not strongly convex), constant
// step 1/L_fhat, initialized at the anchor centroid. Memoryless — no
// temporal information is used.
SolverStepResult static_solve(const MeasurementSet& meas,
                              const NetworkGraph& graph,
                              const StaticConfig& config = {});

EstimateHistory run_static(const Scenario& scenario,
                           const std::vector<MeasurementSet>& measurements,
                           const StaticConfig& config = {});

// Constant-velocity Kalman filter with linearized range updates. A
// documented reimplementation of the comparison baseline: per-node
// state (position, velocity), inter-node ranges linearized about the
// neighbors' predicted positions, true sigma supplied.
struct KalmanConfig {
  double sigma = 1.0;           // measurement noise std (given to the filter)
  double process_noise = 0.05;  // continuous white-acceleration intensity
  double initial_pos_var = 1.0;
  double initial_vel_var = 1.0;
};

struct KalmanState {
  std::vector<Eigen::VectorXd> state;       // per node, size 2p
  std::vector<Eigen::MatrixXd> covariance;  // per node, 2p x 2p
};

KalmanState kalman_init(const NetworkGraph& graph,
                        const Eigen::VectorXd& start_positions,
                        const KalmanConfig& config);

// Predict + update for one measurement step; returns stacked positions.
Eigen::VectorXd kalman_step(KalmanState& state, const MeasurementSet& meas,
                            const NetworkGraph& graph, double dt,
                            const KalmanConfig& config);

EstimateHistory run_kalman(const Scenario& scenario,
                           const std::vector<MeasurementSet>& measurements,
                           const KalmanConfig& config,
                           const Eigen::VectorXd& start);

}  // namespace locdyn
