#pragma once

#include <Eigen/Dense>
#include <deque>
#include <vector>

namespace locdyn {

// Ring buffer of past per-node position estimates, keyed by step index.
// Steps must arrive contiguously.
class PositionHistory {
 public:
  explicit PositionHistory(int capacity = 16) : capacity_(capacity) {}

  void push(int step, const Eigen::VectorXd& estimate);

  bool has(int step) const;
  const Eigen::VectorXd& at(int step) const;

 private:
  int capacity_;
  int first_step_ = 0;
  std::deque<Eigen::VectorXd> buffer_;
};

enum class VelocityMethod { central, taylor6, smooth_fir, external };

// Noncausal centered difference (offline diagnostics):
//   v(k)*dt = (x(k+1) - x(k-1)) / 2
Eigen::VectorXd central_diff(const PositionHistory& history, int k);

// Causal sixth-order Taylor difference:
//   [45(x(k-3)-x(k-5)) - 9(x(k-2)-x(k-6)) + (x(k-1)-x(k-7))] / 60
Eigen::VectorXd taylor6(const PositionHistory& history, int k);

// Holoborodko smooth noise-robust differentiator, degree-2 fit, lag 7:
//   [5(x(k-3)-x(k-5)) + 4(x(k-2)-x(k-6)) + (x(k-1)-x(k-7))] / 32
Eigen::VectorXd smooth_fir(const PositionHistory& history, int k);

// Applies the chosen filter when the history suffices; falls back to
// zero displacement otherwise (prior = previous estimate). `external`
// passes `external_vdt` through.
Eigen::VectorXd estimate_velocity(const PositionHistory& history, int k,
                                  VelocityMethod method, int dim,
                                  const Eigen::VectorXd* external_vdt = nullptr);

}  // namespace locdyn
