#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "locdyn/network.hpp"

namespace locdyn {

// Benchmark scenario: graph + ground truth over K steps.
// truth[k] is the stacked position vector of all nodes at step k (0-based).
struct Scenario {
  NetworkGraph graph;
  std::vector<Eigen::VectorXd> truth;
  double dt = 1.0;
  int K = 0;
  std::string name;
  int outlier_anchor = -1;  // lawnmower SW-corner anchor, else -1

  // Per-step anchor-position override (e.g. surface vessels drifting with
  // the current). Empty means anchors are static; otherwise anchor_track[k]
  // replaces graph.anchors at step k. Topology and visibility never change.
  std::vector<std::vector<Eigen::VectorXd>> anchor_track;

  // Graph as seen at step k: identical to `graph` unless anchor_track is set.
  NetworkGraph graph_at(int k) const;
};

struct LapParams {
  double straight_half_length = 10.0;  // half of each straight segment
  double turn_radius = 10.0;           // semicircular ends
  double vehicle_spacing = 2.0;        // lateral offset between vehicles
  int vehicles = 3;
  double speed = 1.0;                  // m/s
  double slowdown_factor = 0.3;        // speed multiplier inside the window
  Eigen::Vector2d slowdown_center{-15.0, -5.0};
  double slowdown_window = 10.0;       // arc length of the slow segment
  double dt = 1.0;
  int K = 130;
};

struct SpiralParams {
  double radius = 10.0;
  double angular_rate = 0.1;   // rad/s
  double descent_rate = 0.05;  // m/s (depth decreases)
  double start_depth = 0.0;
  int vehicles = 1;
  double dt = 1.0;
  int K = 200;
  int anchor_count = 16;
};

struct LawnmowerParams {
  double swath_length = 30.0;
  double lane_spacing = 5.0;
  int lanes = 6;
  double speed = 1.0;
  double dt = 1.0;
  int vehicles = 1;
  int anchor_count = 6;
};

// Planar lap: two straights joined by semicircular turns, 12 anchors
// framing the bounding box, optional slowdown window.
Scenario gen_lap(const LapParams& params);

// 3D helix of decreasing depth, 16 anchors on the bounding box.
Scenario gen_spiral(const SpiralParams& params);

// Boustrophedon survey path, 6 anchors; the SW-corner anchor index is
// recorded as the outlier target.
Scenario gen_lawnmower(const LawnmowerParams& params);

// Deterministic anchor placement: bounding-box corners first, remaining
// anchors on edge midpoints (longer edges first), then quarter points.
// bbox given as (lo, hi) per dimension. Throws TooFewAnchors if
// count < p + 1.
std::vector<Eigen::VectorXd> place_anchors(const Eigen::VectorXd& lo,
                                           const Eigen::VectorXd& hi,
                                           int count, int p);

// Total path length of the lawnmower pattern (lanes + semicircular turns).
double lawnmower_path_length(const LawnmowerParams& params);

// CSV export: truth rows step,node_id,x,y[,z]; metadata JSON alongside
// (dt, anchors, visibility, edges, outlier anchor).
void write_scenario(const Scenario& scenario, const std::string& dir);
Scenario read_scenario(const std::string& dir);

}  // namespace locdyn
