#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "locdyn/baselines.hpp"
#include "locdyn/errors.hpp"
#include "locdyn/rng.hpp"

using namespace locdyn;

namespace {

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

struct Trilateration {
  NetworkGraph graph;
  MeasurementSet meas;
  Eigen::VectorXd truth;
};

Trilateration trilateration_instance() {
  Trilateration t;
  const Eigen::VectorXd pos = vec2(2.0, 3.0);
  std::vector<Eigen::VectorXd> anchors{vec2(0, 0), vec2(10, 0), vec2(0, 10)};
  t.graph = build_network(1, 2, {}, anchors, {{0, 1, 2}});
  t.meas.r = {{}};
  t.meas.outlier = {{}};
  t.meas.r[0].resize(3);
  t.meas.outlier[0].assign(3, false);
  for (int a = 0; a < 3; ++a) t.meas.r[0][a] = (pos - anchors[a]).norm();
  t.truth = pos;
  return t;
}

}  // namespace

TEST_CASE("static solve: noiseless optimum attains zero surrogate") {
  auto t = trilateration_instance();
  StaticConfig cfg;
  cfg.max_iters = 5000;
  cfg.grad_tolerance = 1e-9;
  auto res = static_solve(t.meas, t.graph, cfg);
  CHECK(fhat_value(res.x_hat, t.meas, t.graph) <= 1e-10);
  CHECK((res.x_hat - t.truth).norm() < 1e-4);
}

TEST_CASE("static solve is deterministic and memoryless") {
  auto t = trilateration_instance();
  auto a = static_solve(t.meas, t.graph);
  auto b = static_solve(t.meas, t.graph);
  CHECK((a.x_hat - b.x_hat).norm() == 0.0);
}

TEST_CASE("kalman predict with zero velocity keeps position") {
  auto t = trilateration_instance();
  KalmanConfig cfg;
  KalmanState st = kalman_init(t.graph, t.truth, cfg);
  const Eigen::VectorXd before = st.state[0].head(2);
  // predict only: apply the transition manually through a zero-info step
  Eigen::MatrixXd F = Eigen::MatrixXd::Identity(4, 4);
  F.topRightCorner(2, 2) = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::VectorXd after = (F * st.state[0]).head(2);
  CHECK((after - before).norm() == 0.0);  // velocity starts at zero
}

TEST_CASE("kalman error decreases on constant-velocity motion") {
  // single node moving linearly, small noise
  Scenario s;
  std::vector<Eigen::VectorXd> anchors{vec2(-5, -5), vec2(45, -5), vec2(-5, 45),
                                       vec2(45, 45)};
  s.graph = build_network(1, 2, {}, anchors, {{0, 1, 2, 3}});
  s.K = 40;
  s.dt = 1.0;
  for (int k = 0; k < s.K; ++k) s.truth.push_back(vec2(k, 0.5 * k));

  const auto meas = simulate_measurements(s, 0.05, 0.0, 3);
  KalmanConfig cfg;
  cfg.sigma = 0.05;
  auto hist = run_kalman(s, meas, cfg, s.truth.front());
  double early = 0.0, late = 0.0;
  for (int k = 1; k <= 5; ++k)
    early += (hist.estimates[k] - s.truth[k]).norm();
  for (int k = 15; k <= 19; ++k)
    late += (hist.estimates[k] - s.truth[k]).norm();
  CHECK(late < early + 0.2);
  CHECK(late / 5.0 < 0.5);
}

TEST_CASE("kalman covariance stays symmetric PSD") {
  auto t = trilateration_instance();
  KalmanConfig cfg;
  cfg.sigma = 1.0;
  KalmanState st = kalman_init(t.graph, t.truth, cfg);
  Rng rng(17);
  Scenario s;
  s.graph = t.graph;
  s.K = 1;
  s.truth = {t.truth};
  for (int step = 0; step < 10000; ++step) {
    auto meas = sample_ranges(s, 0, 1.0, rng);
    kalman_step(st, meas, t.graph, 1.0, cfg);
    const Eigen::MatrixXd& P = st.covariance[0];
    CHECK((P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9);
  }
}

TEST_CASE("covariance trace contracts with zero process noise") {
  auto t = trilateration_instance();
  KalmanConfig cfg;
  cfg.sigma = 1.0;
  cfg.process_noise = 0.0;
  KalmanState st = kalman_init(t.graph, t.truth, cfg);
  Rng rng(19);
  Scenario s;
  s.graph = t.graph;
  s.K = 1;
  s.truth = {t.truth};
  double prev_trace = st.covariance[0].trace();
  for (int step = 0; step < 50; ++step) {
    auto meas = sample_ranges(s, 0, 1.0, rng);
    kalman_step(st, meas, t.graph, 1.0, cfg);
    const double tr = st.covariance[0].trace();
    CHECK(tr <= prev_trace + 1e-9);
    prev_trace = tr;
  }
}
