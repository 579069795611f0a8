#include "locdyn/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "locdyn/errors.hpp"

namespace locdyn {

NetworkGraph Scenario::graph_at(int k) const {
  if (anchor_track.empty()) return graph;
  if (k < 0 || k >= static_cast<int>(anchor_track.size()))
    throw StepOutOfRange("no anchor positions for step");
  if (static_cast<int>(anchor_track[k].size()) != graph.anchor_count())
    throw DimensionMismatch("anchor_track entry size != anchor count");
  NetworkGraph g = graph;
  g.anchors = anchor_track[k];
  for (const auto& a : g.anchors)
    if (a.size() != graph.p)
      throw DimensionMismatch("anchor position dimension != p");
  return g;
}

namespace {

constexpr double kBoxMargin = 1.0;  // anchor box inflation, meters

// Closed stadium curve: bottom straight, right semicircle, top straight,
// left semicircle. a = straight half-length, b = turn radius.
struct StadiumPath {
  double a, b;
  double straight, arc, total;

  StadiumPath(double a_, double b_)
      : a(a_), b(b_), straight(2.0 * a_), arc(M_PI * b_),
        total(2.0 * (2.0 * a_) + 2.0 * M_PI * b_) {}

  Eigen::Vector2d at(double s) const {
    s = std::fmod(s, total);
    if (s < 0) s += total;
    if (s < straight)  // bottom, left to right
      return {-a + s, -b};
    s -= straight;
    if (s < arc) {  // right turn
      const double theta = -M_PI / 2.0 + s / b;
      return {a + b * std::cos(theta), b * std::sin(theta)};
    }
    s -= arc;
    if (s < straight)  // top, right to left
      return {a - s, b};
    s -= straight;
    const double theta = M_PI / 2.0 + s / b;  // left turn
    return {-a + b * std::cos(theta), b * std::sin(theta)};
  }
};

NetworkGraph make_graph(int vehicles, int p,
                        const std::vector<Eigen::VectorXd>& anchors) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < vehicles; ++i)
    for (int j = i + 1; j < vehicles; ++j) edges.emplace_back(i, j);
  std::vector<int> all(anchors.size());
  std::iota(all.begin(), all.end(), 0);
  return build_network(vehicles, p, edges, anchors,
                       std::vector<std::vector<int>>(vehicles, all));
}

void check_hull(const Scenario& s, const Eigen::VectorXd& lo,
                const Eigen::VectorXd& hi) {
  const int p = s.graph.p;
  for (const auto& x : s.truth) {
    for (int i = 0; i < s.graph.n; ++i) {
      for (int d = 0; d < p; ++d) {
        const double v = x(i * p + d);
        if (v < lo(d) - 1e-9 || v > hi(d) + 1e-9)
          throw InvalidParams("truth point escapes the anchor hull");
      }
    }
  }
}

}  // namespace

std::vector<Eigen::VectorXd> place_anchors(const Eigen::VectorXd& lo,
                                           const Eigen::VectorXd& hi,
                                           int count, int p) {
  if (count < p + 1) throw TooFewAnchors("need at least p+1 anchors");
  if (lo.size() != p || hi.size() != p)
    throw BadDimension("bbox dimension mismatch");

  std::vector<Eigen::VectorXd> out;
  const int corners = 1 << p;
  for (int mask = 0; mask < corners && static_cast<int>(out.size()) < count;
       ++mask) {
    Eigen::VectorXd c(p);
    for (int d = 0; d < p; ++d) c(d) = (mask >> d) & 1 ? hi(d) : lo(d);
    out.push_back(c);
  }

  // Box edges: corner pairs differing in one coordinate, longer edges first.
  struct BoxEdge {
    Eigen::VectorXd from, to;
    double length;
  };
  std::vector<BoxEdge> box_edges;
  for (int d = 0; d < p; ++d) {
    const int others = 1 << (p - 1);
    for (int mask = 0; mask < others; ++mask) {
      Eigen::VectorXd from(p), to(p);
      int bit = 0;
      for (int dd = 0; dd < p; ++dd) {
        if (dd == d) {
          from(dd) = lo(dd);
          to(dd) = hi(dd);
        } else {
          from(dd) = to(dd) = (mask >> bit) & 1 ? hi(dd) : lo(dd);
          ++bit;
        }
      }
      box_edges.push_back({from, to, hi(d) - lo(d)});
    }
  }
  std::stable_sort(box_edges.begin(), box_edges.end(),
                   [](const BoxEdge& x, const BoxEdge& y) {
                     return x.length > y.length;
                   });

  // Midpoints first, then quarter and three-quarter points.
  for (double frac : {0.5, 0.25, 0.75}) {
    for (const auto& e : box_edges) {
      if (static_cast<int>(out.size()) >= count) return out;
      out.push_back(e.from + frac * (e.to - e.from));
    }
  }
  if (static_cast<int>(out.size()) < count)
    throw InvalidParams("anchor count exceeds supported placement slots");
  return out;
}

Scenario gen_lap(const LapParams& params) {
  if (params.speed <= 0 || params.dt <= 0 || params.K < 1 ||
      params.vehicles < 1 || params.turn_radius <= 0)
    throw InvalidParams("lap: speed, dt, K, vehicles, radius must be positive");

  const int p = 2;
  const int nv = params.vehicles;
  Scenario s;
  s.dt = params.dt;
  s.K = params.K;
  s.name = "lap";

  // Vehicles ride parallel stadium curves offset in turn radius.
  std::vector<StadiumPath> paths;
  double b_max = 0.0;
  for (int v = 0; v < nv; ++v) {
    const double offset = (v - (nv - 1) / 2.0) * params.vehicle_spacing;
    const double b = params.turn_radius + offset;
    if (b <= 0) throw InvalidParams("lap: vehicle spacing collapses a turn");
    paths.emplace_back(params.straight_half_length, b);
    b_max = std::max(b_max, b);
  }

  // Slowdown window located at the closest approach to the target point.
  std::vector<double> slow_start(nv, -1.0);
  if (params.slowdown_factor != 1.0) {
    for (int v = 0; v < nv; ++v) {
      double best_s = 0.0, best_d = 1e300;
      const int samples = 4000;
      for (int q = 0; q < samples; ++q) {
        const double sq = paths[v].total * q / samples;
        const double dist = (paths[v].at(sq) - params.slowdown_center).norm();
        if (dist < best_d) {
          best_d = dist;
          best_s = sq;
        }
      }
      slow_start[v] = best_s - params.slowdown_window / 2.0;
    }
  }

  s.truth.assign(params.K, Eigen::VectorXd::Zero(nv * p));
  for (int v = 0; v < nv; ++v) {
    double arc = 0.0;
    for (int k = 0; k < params.K; ++k) {
      s.truth[k].segment(v * p, p) = paths[v].at(arc);
      double speed = params.speed;
      if (slow_start[v] >= 0) {
        double rel = std::fmod(arc - slow_start[v], paths[v].total);
        if (rel < 0) rel += paths[v].total;
        if (rel < params.slowdown_window) speed *= params.slowdown_factor;
      }
      arc += speed * params.dt;
    }
  }

  Eigen::VectorXd lo(p), hi(p);
  lo << -params.straight_half_length - b_max - kBoxMargin, -b_max - kBoxMargin;
  hi << params.straight_half_length + b_max + kBoxMargin, b_max + kBoxMargin;
  s.graph = make_graph(nv, p, place_anchors(lo, hi, 12, p));
  check_hull(s, lo, hi);
  return s;
}

Scenario gen_spiral(const SpiralParams& params) {
  if (params.radius <= 0 || params.dt <= 0 || params.K < 1 ||
      params.vehicles < 1)
    throw InvalidParams("spiral: radius, dt, K, vehicles must be positive");

  const int p = 3;
  const int nv = params.vehicles;
  Scenario s;
  s.dt = params.dt;
  s.K = params.K;
  s.name = "spiral";

  s.truth.assign(params.K, Eigen::VectorXd::Zero(nv * p));
  for (int v = 0; v < nv; ++v) {
    const double phase = 2.0 * M_PI * v / nv;
    for (int k = 0; k < params.K; ++k) {
      const double t = k * params.dt;
      const double theta = params.angular_rate * t + phase;
      s.truth[k](v * p + 0) = params.radius * std::cos(theta);
      s.truth[k](v * p + 1) = params.radius * std::sin(theta);
      s.truth[k](v * p + 2) = params.start_depth - params.descent_rate * t;
    }
  }

  const double z_end =
      params.start_depth - params.descent_rate * (params.K - 1) * params.dt;
  Eigen::VectorXd lo(p), hi(p);
  lo << -params.radius - kBoxMargin, -params.radius - kBoxMargin,
      std::min(params.start_depth, z_end) - kBoxMargin;
  hi << params.radius + kBoxMargin, params.radius + kBoxMargin,
      std::max(params.start_depth, z_end) + kBoxMargin;
  s.graph = make_graph(nv, p, place_anchors(lo, hi, params.anchor_count, p));
  check_hull(s, lo, hi);
  return s;
}

double lawnmower_path_length(const LawnmowerParams& params) {
  return params.lanes * params.swath_length +
         (params.lanes - 1) * M_PI * (params.lane_spacing / 2.0);
}

Scenario gen_lawnmower(const LawnmowerParams& params) {
  if (params.swath_length <= 0 || params.lane_spacing <= 0 ||
      params.lanes < 1 || params.speed <= 0 || params.dt <= 0 ||
      params.vehicles < 1)
    throw InvalidParams("lawnmower: all geometric params must be positive");

  const int p = 2;
  const int nv = params.vehicles;
  const double turn_r = params.lane_spacing / 2.0;
  const double total = lawnmower_path_length(params);

  // Position along the boustrophedon path at arc length s.
  auto at = [&](double s) -> Eigen::Vector2d {
    s = std::clamp(s, 0.0, total);
    for (int lane = 0; lane < params.lanes; ++lane) {
      const double y = lane * params.lane_spacing;
      const bool forward = lane % 2 == 0;
      if (s <= params.swath_length + 1e-12) {
        const double x = forward ? s : params.swath_length - s;
        return {x, y};
      }
      s -= params.swath_length;
      if (lane == params.lanes - 1) break;
      const double turn_len = M_PI * turn_r;
      if (s <= turn_len + 1e-12) {
        const double phi = s / turn_r;  // 0..pi
        const double cx = forward ? params.swath_length : 0.0;
        const double cy = y + turn_r;
        const double x = cx + (forward ? 1.0 : -1.0) * turn_r * std::sin(phi);
        return {x, cy - turn_r * std::cos(phi)};
      }
      s -= turn_len;
    }
    // past the end: hold the final point
    const double y_last = (params.lanes - 1) * params.lane_spacing;
    const bool fwd = (params.lanes - 1) % 2 == 0;
    return {fwd ? params.swath_length : 0.0, y_last};
  };

  Scenario s;
  s.dt = params.dt;
  s.K = static_cast<int>(std::floor(total / (params.speed * params.dt))) + 1;
  s.name = "lawnmower";

  s.truth.assign(s.K, Eigen::VectorXd::Zero(nv * p));
  for (int v = 0; v < nv; ++v) {
    const double lateral = nv > 1 ? v * params.lane_spacing / nv : 0.0;
    for (int k = 0; k < s.K; ++k) {
      Eigen::Vector2d pt = at(k * params.speed * params.dt);
      s.truth[k](v * p + 0) = pt.x();
      s.truth[k](v * p + 1) = pt.y() + lateral;
    }
  }

  const double y_span = (params.lanes - 1) * params.lane_spacing +
                        (nv > 1 ? params.lane_spacing : 0.0) + turn_r;
  Eigen::VectorXd lo(p), hi(p);
  lo << -turn_r - kBoxMargin, -kBoxMargin;
  hi << params.swath_length + turn_r + kBoxMargin, y_span + kBoxMargin;
  auto anchors = place_anchors(lo, hi, params.anchor_count, p);

  // SW corner = smallest x + y sum (ties by x).
  int sw = 0;
  for (int a = 1; a < static_cast<int>(anchors.size()); ++a) {
    const double cur = anchors[a](0) + anchors[a](1);
    const double best = anchors[sw](0) + anchors[sw](1);
    if (cur < best - 1e-12 ||
        (std::abs(cur - best) < 1e-12 && anchors[a](0) < anchors[sw](0)))
      sw = a;
  }
  s.outlier_anchor = sw;
  s.graph = make_graph(nv, p, anchors);
  check_hull(s, lo, hi);
  return s;
}

void write_scenario(const Scenario& scenario, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const int p = scenario.graph.p;

  std::ofstream truth(std::filesystem::path(dir) / "truth.csv");
  truth << "step,node_id,x,y" << (p == 3 ? ",z" : "") << "\n";
  truth.precision(17);
  for (int k = 0; k < scenario.K; ++k) {
    for (int i = 0; i < scenario.graph.n; ++i) {
      truth << k << "," << i;
      for (int d = 0; d < p; ++d) truth << "," << scenario.truth[k](i * p + d);
      truth << "\n";
    }
  }

  nlohmann::json meta;
  meta["name"] = scenario.name;
  meta["dt"] = scenario.dt;
  meta["K"] = scenario.K;
  meta["n"] = scenario.graph.n;
  meta["p"] = p;
  meta["outlier_anchor"] = scenario.outlier_anchor;
  for (auto [i, j] : scenario.graph.edges)
    meta["edges"].push_back(std::vector<int>{i, j});
  if (scenario.graph.edges.empty()) meta["edges"] = nlohmann::json::array();
  for (const auto& a : scenario.graph.anchors) {
    std::vector<double> coords(a.begin(), a.end());
    meta["anchors"].push_back(coords);
  }
  meta["visibility"] = scenario.graph.visibility;
  std::ofstream(std::filesystem::path(dir) / "meta.json") << meta.dump(2)
                                                          << "\n";
}

Scenario read_scenario(const std::string& dir) {
  std::ifstream meta_in(std::filesystem::path(dir) / "meta.json");
  if (!meta_in) throw std::runtime_error("cannot open scenario meta: " + dir);
  nlohmann::json meta;
  meta_in >> meta;

  Scenario s;
  s.name = meta.at("name");
  s.dt = meta.at("dt");
  s.K = meta.at("K");
  s.outlier_anchor = meta.value("outlier_anchor", -1);
  const int n = meta.at("n");
  const int p = meta.at("p");

  std::vector<std::pair<int, int>> edges;
  for (const auto& e : meta.at("edges")) edges.emplace_back(e.at(0), e.at(1));
  std::vector<Eigen::VectorXd> anchors;
  for (const auto& a : meta.at("anchors")) {
    Eigen::VectorXd v(a.size());
    for (int d = 0; d < static_cast<int>(a.size()); ++d) v(d) = a.at(d);
    anchors.push_back(v);
  }
  auto vis = meta.at("visibility").get<std::vector<std::vector<int>>>();
  s.graph = build_network(n, p, edges, anchors, vis);

  s.truth.assign(s.K, Eigen::VectorXd::Zero(n * p));
  std::ifstream truth_in(std::filesystem::path(dir) / "truth.csv");
  if (!truth_in) throw std::runtime_error("cannot open truth.csv in " + dir);
  std::string line;
  std::getline(truth_in, line);  // header
  while (std::getline(truth_in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    const int k = static_cast<int>(vals[0]);
    const int i = static_cast<int>(vals[1]);
    for (int d = 0; d < p; ++d) s.truth[k](i * p + d) = vals[2 + d];
  }
  return s;
}

}  // namespace locdyn
