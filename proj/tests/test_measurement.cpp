#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "locdyn/errors.hpp"
#include "locdyn/measurement.hpp"
#include "locdyn/trajectory.hpp"

using namespace locdyn;

namespace {

// Minimal two-node scenario at a fixed separation.
Scenario two_node_scenario(double separation, int K = 1) {
  Scenario s;
  std::vector<Eigen::VectorXd> anchors;
  Eigen::VectorXd a(2);
  a << 0, 50;
  anchors.push_back(a);
  a << 50, 50;
  anchors.push_back(a);
  a << -50, -50;
  anchors.push_back(a);
  s.graph = build_network(2, 2, {{0, 1}}, anchors,
                          {{0, 1, 2}, {0, 1, 2}});
  s.K = K;
  Eigen::VectorXd x(4);
  x << 0, 0, separation, 0;
  s.truth.assign(K, x);
  return s;
}

}  // namespace

TEST_CASE("sigma zero reproduces true distances") {
  auto s = two_node_scenario(20.0);
  Rng rng(1);
  auto m = sample_ranges(s, 0, 0.0, rng);
  CHECK(m.d[0] == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(m.r[0][0] == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("step bounds enforced") {
  auto s = two_node_scenario(20.0);
  Rng rng(1);
  CHECK_THROWS_AS(sample_ranges(s, 5, 1.0, rng), StepOutOfRange);
  CHECK_THROWS_AS(sample_ranges(s, -1, 1.0, rng), StepOutOfRange);
}

TEST_CASE("noise statistics match the generative model") {
  auto s = two_node_scenario(20.0);
  Rng rng(7);
  const int samples = 100000;
  double sum = 0.0, sq = 0.0;
  for (int t = 0; t < samples; ++t) {
    auto m = sample_ranges(s, 0, 1.0, rng);
    sum += m.d[0];
    sq += m.d[0] * m.d[0];
  }
  const double mean = sum / samples;
  const double stddev = std::sqrt(sq / samples - mean * mean);
  CHECK(mean == doctest::Approx(20.0).epsilon(0.001));
  CHECK(stddev == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("absolute value keeps short ranges nonnegative") {
  auto s = two_node_scenario(0.1);
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    auto m = sample_ranges(s, 0, 1.0, rng);
    CHECK(m.d[0] >= 0.0);
    for (const auto& row : m.r)
      for (double r : row) CHECK(r >= 0.0);
  }
}

TEST_CASE("same seed, same measurements") {
  auto s = two_node_scenario(20.0);
  Rng a(99), b(99);
  auto ma = sample_ranges(s, 0, 1.0, a);
  auto mb = sample_ranges(s, 0, 1.0, b);
  CHECK(ma.d[0] == mb.d[0]);
  for (int i = 0; i < 2; ++i)
    for (std::size_t v = 0; v < ma.r[i].size(); ++v)
      CHECK(ma.r[i][v] == mb.r[i][v]);
}

TEST_CASE("outlier injection edge probabilities") {
  auto s = two_node_scenario(20.0);
  Rng rng(5);
  auto m = sample_ranges(s, 0, 1.0, rng);

  Rng r0(11);
  auto none = inject_outliers(m, s.graph, 0.0, 0, r0);
  CHECK(none.r[0][0] == m.r[0][0]);
  CHECK_FALSE(none.outlier[0][0]);

  Rng r1(11);
  auto all = inject_outliers(m, s.graph, 1.0, 0, r1);
  CHECK(all.r[0][0] == 2.0 * m.r[0][0]);
  CHECK(all.outlier[0][0]);
  CHECK(all.r[0][1] == m.r[0][1]);  // other anchors untouched

  CHECK_THROWS_AS(inject_outliers(m, s.graph, 1.5, 0, rng), BadProbability);
  CHECK_THROWS_AS(inject_outliers(m, s.graph, 0.5, 9, rng), BadProbability);
}

TEST_CASE("1% contamination count lands in the binomial 3-sigma band") {
  Scenario s = two_node_scenario(20.0);
  // one vehicle's view only: count contaminations of node 0, anchor 0
  Rng noise(17), outliers(23);
  int contaminated = 0;
  const int steps = 10000;
  for (int t = 0; t < steps; ++t) {
    auto m = sample_ranges(s, 0, 1.0, noise);
    auto c = inject_outliers(m, s.graph, 0.01, 0, outliers);
    if (c.outlier[0][0]) ++contaminated;
  }
  CHECK(contaminated >= 60);
  CHECK(contaminated <= 140);
}

TEST_CASE("generic contamination scales and flags every range at prob 1") {
  auto s = two_node_scenario(20.0);
  Rng rng(3);
  auto m = sample_ranges(s, 0, 1.0, rng);

  Rng r0(31);
  auto none = contaminate_ranges(m, s.graph, 0.0, 3.0, r0);
  CHECK(none.d[0] == m.d[0]);
  CHECK_FALSE(none.d_outlier[0]);
  CHECK(none.r[1][2] == m.r[1][2]);

  Rng r1(31);
  auto all = contaminate_ranges(m, s.graph, 1.0, 3.0, r1);
  CHECK(all.d[0] == 3.0 * m.d[0]);
  CHECK(all.d_outlier[0]);
  for (int i = 0; i < 2; ++i)
    for (std::size_t v = 0; v < m.r[i].size(); ++v) {
      CHECK(all.r[i][v] == 3.0 * m.r[i][v]);
      CHECK(all.outlier[i][v]);
    }

  CHECK_THROWS_AS(contaminate_ranges(m, s.graph, -0.1, 2.0, rng),
                  BadProbability);
  CHECK_THROWS_AS(contaminate_ranges(m, s.graph, 0.5, 0.0, rng),
                  InvalidParams);
}

TEST_CASE("per-step anchor override feeds sampling") {
  auto s = two_node_scenario(20.0);
  // same graph without overrides
  CHECK(s.graph_at(0).anchors[0] == s.graph.anchors[0]);

  auto shifted = s.graph.anchors;
  for (auto& a : shifted) a.array() += 5.0;
  s.anchor_track.assign(1, shifted);
  Rng rng(1);
  auto m = sample_ranges(s, 0, 0.0, rng);
  const Eigen::Vector2d x0 = s.truth[0].head<2>();
  CHECK(m.r[0][0] ==
        doctest::Approx((x0 - shifted[0]).norm()).epsilon(1e-12));

  s.anchor_track[0].pop_back();
  CHECK_THROWS_AS(s.graph_at(0), DimensionMismatch);
  s.anchor_track.assign(1, shifted);
  CHECK_THROWS_AS(s.graph_at(1), StepOutOfRange);
}
