#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "locdyn/convex.hpp"
#include "locdyn/measurement.hpp"
#include "locdyn/network.hpp"
#include "locdyn/trajectory.hpp"
#include "locdyn/velocity.hpp"

namespace locdyn {

enum class InitPolicy { warm_start, random_box };

struct SolverConfig {
  double lambda = 0.5;
  LipschitzBound bound = LipschitzBound::spectral;
  int max_iters = 500;
  double grad_tolerance = 1e-6;  // RMS of the gradient, ||grad|| / sqrt(n*p)
  InitPolicy init_policy = InitPolicy::warm_start;
  VelocityMethod velocity = VelocityMethod::smooth_fir;
  bool record_objective = false;
  bool record_iterates = false;
};

struct SolverStepResult {
  Eigen::VectorXd x_hat;
  int iterations = 0;
  double grad_rms = 0.0;
  std::vector<double> objective;            // g(x(kappa)) when recorded
  std::vector<Eigen::VectorXd> iterates;    // x(kappa) when recorded
  long messages = 0;                        // 2|E| deliveries per iteration
};

struct EstimateHistory {
  std::vector<Eigen::VectorXd> estimates;  // x_hat(k), stacked
  std::vector<Eigen::VectorXd> predictions;
  std::vector<int> iterations;
  std::vector<double> grad_rms;
  long total_messages = 0;
};

// x_tilde(k) = x_hat(k-1) + v(k-1)*dt, componentwise per node.
Eigen::VectorXd predict(const Eigen::VectorXd& x_prev,
                        const Eigen::VectorXd& vdt);

// Per-node gradient entry of g_lambda at the extrapolated point:
//   delta_i*w_i - sum_j w_j - sum_j P_Bij(w_i - w_j)
//   + sum_{a in A_i} (w_i - P_Ba(w_i)) + 2*lambda*(w_i - x_pred_i)
// Reads only node-local data and neighbor values through `neighbor_w`.
Eigen::VectorXd node_gradient(
    int i, const Eigen::VectorXd& w_i,
    const std::function<const Eigen::VectorXd&(int)>& neighbor_w,
    const MeasurementSet& meas, const NetworkGraph& graph, double lambda,
    const Eigen::VectorXd& x_pred_i);

// One measurement step: Nesterov loop with extrapolation beta and step
// 1/L, stopping on gradient RMS or max_iters. Throws NumericalDivergence
// on non-finite iterates.
SolverStepResult solve_step(const MeasurementSet& meas,
                            const Eigen::VectorXd& x_pred,
                            const Eigen::VectorXd& x_init,
                            const SolverConfig& config,
                            const ConvexConstants& constants,
                            const NetworkGraph& graph);

struct TraceResult {
  SolverStepResult result;
  long deliveries = 0;       // neighbor deliveries actually performed
  long broadcasts = 0;       // one per node per iteration
};

// Same iteration executed through explicit per-node mailboxes; each
// iteration every node broadcasts w_i to its neighbors only, and a
// non-neighbor read throws ProtocolViolation. Bitwise-identical to
// solve_step given the same inputs.
TraceResult distributed_round_trace(const MeasurementSet& meas,
                                    const Eigen::VectorXd& x_pred,
                                    const Eigen::VectorXd& x_init,
                                    const SolverConfig& config,
                                    const ConvexConstants& constants,
                                    const NetworkGraph& graph);

// Full LocDyn run over pre-sampled measurements. Step 0 is initialized
// and anchored at `start` (the trajectory start marker); later steps
// use the velocity prediction.
EstimateHistory run_locdyn(const Scenario& scenario,
                           const std::vector<MeasurementSet>& measurements,
                           const SolverConfig& config,
                           const Eigen::VectorXd& start,
                           std::uint64_t seed = 0);

// Convenience wrapper: samples measurements (with optional outlier
// contamination on scenario.outlier_anchor) and runs LocDyn.
EstimateHistory run_trajectory(const Scenario& scenario, double sigma,
                               double outlier_prob, const SolverConfig& config,
                               std::uint64_t seed);

// Shared measurement stream generator so that all algorithms in a trial
// consume identical draws. Per-step substreams are seed-derived.
std::vector<MeasurementSet> simulate_measurements(const Scenario& scenario,
                                                  double sigma,
                                                  double outlier_prob,
                                                  std::uint64_t seed);

}  // namespace locdyn
