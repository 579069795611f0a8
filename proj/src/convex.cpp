#include "locdyn/convex.hpp"

#include <algorithm>
#include <cmath>

#include "locdyn/errors.hpp"

namespace locdyn {

namespace {

void check_shape(const Eigen::VectorXd& x, const NetworkGraph& graph) {
  if (x.size() != static_cast<Eigen::Index>(graph.n) * graph.p)
    throw DimensionMismatch("position vector has wrong length");
}

}  // namespace

Eigen::VectorXd project_ball(const Eigen::VectorXd& y,
                             const Eigen::VectorXd& center, double radius) {
  const Eigen::VectorXd u = y - center;
  const double norm = u.norm();
  if (norm <= radius) return y;
  return center + (radius / norm) * u;
}

double f_value(const Eigen::VectorXd& x, const MeasurementSet& meas,
               const NetworkGraph& graph) {
  check_shape(x, graph);
  const int p = graph.p;
  double total = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    auto [i, j] = graph.edges[e];
    const double dist = (x.segment(i * p, p) - x.segment(j * p, p)).norm();
    const double res = dist - meas.d[e];
    total += 0.5 * res * res;
  }
  for (int i = 0; i < graph.n; ++i) {
    for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
      const int k = graph.visibility[i][v];
      const double dist = (x.segment(i * p, p) - graph.anchors[k]).norm();
      const double res = dist - meas.r[i][v];
      total += 0.5 * res * res;
    }
  }
  return total;
}

double fhat_value(const Eigen::VectorXd& x, const MeasurementSet& meas,
                  const NetworkGraph& graph) {
  check_shape(x, graph);
  const int p = graph.p;
  double total = 0.0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    auto [i, j] = graph.edges[e];
    const Eigen::VectorXd u = x.segment(i * p, p) - x.segment(j * p, p);
    const double excess = std::max(0.0, u.norm() - meas.d[e]);
    total += 0.5 * excess * excess;
  }
  for (int i = 0; i < graph.n; ++i) {
    for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
      const int k = graph.visibility[i][v];
      const double dist = (x.segment(i * p, p) - graph.anchors[k]).norm();
      const double excess = std::max(0.0, dist - meas.r[i][v]);
      total += 0.5 * excess * excess;
    }
  }
  return total;
}

Eigen::VectorXd fhat_grad(const Eigen::VectorXd& x, const MeasurementSet& meas,
                          const NetworkGraph& graph) {
  check_shape(x, graph);
  const int p = graph.p;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
  for (int e = 0; e < graph.edge_count(); ++e) {
    auto [i, j] = graph.edges[e];
    const Eigen::VectorXd u = x.segment(i * p, p) - x.segment(j * p, p);
    // gradient of 1/2 d^2_B(u) is u - P_B(u)
    const Eigen::VectorXd res = u - project_ball(u, zero, meas.d[e]);
    grad.segment(i * p, p) += res;
    grad.segment(j * p, p) -= res;
  }
  for (int i = 0; i < graph.n; ++i) {
    for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
      const int k = graph.visibility[i][v];
      const Eigen::VectorXd xi = x.segment(i * p, p);
      grad.segment(i * p, p) +=
          xi - project_ball(xi, graph.anchors[k], meas.r[i][v]);
    }
  }
  return grad;
}

double g_value(const Eigen::VectorXd& x, const Eigen::VectorXd& x_pred,
               double lambda, const MeasurementSet& meas,
               const NetworkGraph& graph) {
  if (x_pred.size() != x.size())
    throw DimensionMismatch("prediction length mismatch");
  if (lambda <= 0.0) throw NonpositiveLambda("lambda must be positive");
  return fhat_value(x, meas, graph) + lambda * (x - x_pred).squaredNorm();
}

Eigen::VectorXd g_grad(const Eigen::VectorXd& x, const Eigen::VectorXd& x_pred,
                       double lambda, const MeasurementSet& meas,
                       const NetworkGraph& graph) {
  if (x_pred.size() != x.size())
    throw DimensionMismatch("prediction length mismatch");
  if (lambda <= 0.0) throw NonpositiveLambda("lambda must be positive");
  return fhat_grad(x, meas, graph) + 2.0 * lambda * (x - x_pred);
}

ConvexConstants compute_constants(const NetworkGraph& graph, double lambda,
                                  LipschitzBound bound) {
  if (lambda <= 0.0) throw NonpositiveLambda("lambda must be positive");
  int max_vis = 0;
  for (const auto& vis : graph.visibility)
    max_vis = std::max(max_vis, static_cast<int>(vis.size()));

  double graph_term = 0.0;
  if (graph.edge_count() > 0) {
    if (bound == LipschitzBound::spectral) {
      const auto inc = incidence_and_laplacian(graph);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inc.laplacian);
      graph_term = es.eigenvalues().maxCoeff();
    } else {
      graph_term =
          2.0 * *std::max_element(graph.degree.begin(), graph.degree.end());
    }
  }

  ConvexConstants c;
  c.lambda = lambda;
  c.L_fhat = graph_term + max_vis;
  c.L = c.L_fhat + 2.0 * lambda;
  c.m = 2.0 * lambda;
  const double ratio = std::sqrt(c.m / c.L);
  c.beta = (1.0 - ratio) / (1.0 + ratio);
  return c;
}

}  // namespace locdyn
