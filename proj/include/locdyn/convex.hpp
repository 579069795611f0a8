#pragma once

#include <Eigen/Dense>

#include "locdyn/measurement.hpp"
#include "locdyn/network.hpp"

namespace locdyn {

// Constants of the regularized objective g_lambda:
//   L = L_fhat + 2*lambda,  m = 2*lambda,
//   beta = (1 - sqrt(m/L)) / (1 + sqrt(m/L)).
struct ConvexConstants {
  double lambda = 0.0;
  double L_fhat = 0.0;
  double L = 0.0;
  double m = 0.0;
  double beta = 0.0;
};

// Euclidean projection onto the ball {y : ||y - center|| <= radius}.
Eigen::VectorXd project_ball(const Eigen::VectorXd& y,
                             const Eigen::VectorXd& center, double radius);

// Nonconvex ML cost f (diagnostics only; never optimized):
//   sum_edges 1/2 (||x_i - x_j|| - d_ij)^2 + sum 1/2 (||x_i - a_k|| - r_ik)^2
double f_value(const Eigen::VectorXd& x, const MeasurementSet& meas,
               const NetworkGraph& graph);

// Convex surrogate: squared distances to balls of radius d_ij / r_ik.
double fhat_value(const Eigen::VectorXd& x, const MeasurementSet& meas,
                  const NetworkGraph& graph);

Eigen::VectorXd fhat_grad(const Eigen::VectorXd& x, const MeasurementSet& meas,
                          const NetworkGraph& graph);

// g = fhat(x) + lambda * ||x - x_pred||^2
double g_value(const Eigen::VectorXd& x, const Eigen::VectorXd& x_pred,
               double lambda, const MeasurementSet& meas,
               const NetworkGraph& graph);

// grad g = grad fhat(x) + 2*lambda*(x - x_pred)
Eigen::VectorXd g_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& x_pred,
                       double lambda, const MeasurementSet& meas,
                       const NetworkGraph& graph);

// L_fhat bound options. Spectral: lambda_max(Laplacian) + max_i |A_i|.
// Decentralized: 2*delta_max + max_i |A_i| (no eigendecomposition;
// coarser, only slows convergence).
enum class LipschitzBound { spectral, decentralized };

ConvexConstants compute_constants(const NetworkGraph& graph, double lambda,
                                  LipschitzBound bound = LipschitzBound::spectral);

}  // namespace locdyn
