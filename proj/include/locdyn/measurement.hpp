#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "locdyn/network.hpp"
#include "locdyn/rng.hpp"

namespace locdyn {

struct Scenario;  // trajectory.hpp

// Noisy ranges at one time step. Edge ranges are aligned with
// graph.edges; anchor ranges r[i][v] align with graph.visibility[i].
struct MeasurementSet {
  int step = 0;
  std::vector<double> d;                       // per edge
  std::vector<std::vector<double>> r;          // per node, per visible anchor
  std::vector<std::vector<bool>> outlier;      // flags, same shape as r
  std::vector<bool> d_outlier;                 // per-edge flags
};

// Generative model: range = |true distance + N(0, sigma^2)|, one draw
// per undirected edge. Deterministic given the rng state.
MeasurementSet sample_ranges(const Scenario& scenario, int k, double sigma,
                             Rng& rng);

// With probability `prob`, independently per node that sees
// `target_anchor`, the range to it is doubled and flagged.
MeasurementSet inject_outliers(const MeasurementSet& meas,
                               const NetworkGraph& graph, double prob,
                               int target_anchor, Rng& rng);

// Generic contamination hook for extended experiments: every range
// (edge and anchor alike) is independently scaled by `multiplier` with
// probability `prob` and flagged. Not used by the stock scenarios.
MeasurementSet contaminate_ranges(const MeasurementSet& meas,
                                  const NetworkGraph& graph, double prob,
                                  double multiplier, Rng& rng);

// CSV rows: step,kind,i,j_or_anchor,range,outlier_flag
void write_measurements_csv(const std::string& path,
                            const std::vector<MeasurementSet>& sets,
                            const NetworkGraph& graph);

}  // namespace locdyn
