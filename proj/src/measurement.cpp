#include "locdyn/measurement.hpp"

#include <cmath>
#include <fstream>

#include "locdyn/errors.hpp"
#include "locdyn/trajectory.hpp"

namespace locdyn {

MeasurementSet sample_ranges(const Scenario& scenario, int k, double sigma,
                             Rng& rng) {
  if (k < 0 || k >= scenario.K) throw StepOutOfRange("step out of range");
  if (sigma < 0) throw InvalidParams("sigma must be nonnegative");

  const NetworkGraph g = scenario.graph_at(k);
  const int p = g.p;
  const Eigen::VectorXd& x = scenario.truth[k];

  MeasurementSet m;
  m.step = k;
  m.d.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [i, j] = g.edges[e];
    const double dist = (x.segment(i * p, p) - x.segment(j * p, p)).norm();
    m.d[e] = std::abs(dist + rng.gaussian(0.0, sigma));
  }
  m.d_outlier.assign(g.edge_count(), false);
  m.r.resize(g.n);
  m.outlier.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    m.r[i].resize(g.visibility[i].size());
    m.outlier[i].assign(g.visibility[i].size(), false);
    for (std::size_t v = 0; v < g.visibility[i].size(); ++v) {
      const int a = g.visibility[i][v];
      const double dist = (x.segment(i * p, p) - g.anchors[a]).norm();
      m.r[i][v] = std::abs(dist + rng.gaussian(0.0, sigma));
    }
  }
  return m;
}

MeasurementSet inject_outliers(const MeasurementSet& meas,
                               const NetworkGraph& graph, double prob,
                               int target_anchor, Rng& rng) {
  if (prob < 0.0 || prob > 1.0) throw BadProbability("prob must be in [0,1]");
  if (target_anchor < 0 || target_anchor >= graph.anchor_count())
    throw BadProbability("invalid target anchor");

  MeasurementSet out = meas;
  for (int i = 0; i < graph.n; ++i) {
    for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
      if (graph.visibility[i][v] != target_anchor) continue;
      if (rng.uniform() < prob) {
        out.r[i][v] *= 2.0;
        out.outlier[i][v] = true;
      }
    }
  }
  return out;
}

MeasurementSet contaminate_ranges(const MeasurementSet& meas,
                                  const NetworkGraph& graph, double prob,
                                  double multiplier, Rng& rng) {
  if (prob < 0.0 || prob > 1.0) throw BadProbability("prob must be in [0,1]");
  if (multiplier <= 0.0) throw InvalidParams("multiplier must be positive");

  MeasurementSet out = meas;
  if (out.d_outlier.size() != out.d.size())
    out.d_outlier.assign(out.d.size(), false);
  for (std::size_t e = 0; e < out.d.size(); ++e) {
    if (rng.uniform() < prob) {
      out.d[e] *= multiplier;
      out.d_outlier[e] = true;
    }
  }
  for (int i = 0; i < graph.n; ++i) {
    for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
      if (rng.uniform() < prob) {
        out.r[i][v] *= multiplier;
        out.outlier[i][v] = true;
      }
    }
  }
  return out;
}

void write_measurements_csv(const std::string& path,
                            const std::vector<MeasurementSet>& sets,
                            const NetworkGraph& graph) {
  std::ofstream out(path);
  out.precision(17);
  out << "step,kind,i,j_or_anchor,range,outlier_flag\n";
  for (const auto& m : sets) {
    for (int e = 0; e < graph.edge_count(); ++e) {
      auto [i, j] = graph.edges[e];
      const bool flag = e < static_cast<int>(m.d_outlier.size()) && m.d_outlier[e];
      out << m.step << ",edge," << i << "," << j << "," << m.d[e] << ","
          << (flag ? 1 : 0) << "\n";
    }
    for (int i = 0; i < graph.n; ++i) {
      for (std::size_t v = 0; v < graph.visibility[i].size(); ++v) {
        out << m.step << ",anchor," << i << "," << graph.visibility[i][v]
            << "," << m.r[i][v] << "," << (m.outlier[i][v] ? 1 : 0) << "\n";
      }
    }
  }
}

}  // namespace locdyn
