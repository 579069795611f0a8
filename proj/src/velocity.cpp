#include "locdyn/velocity.hpp"

#include "locdyn/errors.hpp"

namespace locdyn {

void PositionHistory::push(int step, const Eigen::VectorXd& estimate) {
  if (!buffer_.empty() && step != first_step_ + static_cast<int>(buffer_.size()))
    throw InsufficientHistory("history steps must be contiguous");
  if (buffer_.empty()) first_step_ = step;
  buffer_.push_back(estimate);
  while (static_cast<int>(buffer_.size()) > capacity_) {
    buffer_.pop_front();
    ++first_step_;
  }
}

bool PositionHistory::has(int step) const {
  return step >= first_step_ &&
         step < first_step_ + static_cast<int>(buffer_.size());
}

const Eigen::VectorXd& PositionHistory::at(int step) const {
  if (!has(step)) throw InsufficientHistory("step not in history");
  return buffer_[step - first_step_];
}

Eigen::VectorXd central_diff(const PositionHistory& history, int k) {
  if (!history.has(k - 1) || !history.has(k + 1))
    throw InsufficientHistory("central_diff needs k-1 and k+1");
  return (history.at(k + 1) - history.at(k - 1)) / 2.0;
}

namespace {

Eigen::VectorXd lagged_filter(const PositionHistory& history, int k,
                              double c3, double c2, double c1, double denom) {
  for (int lag = 1; lag <= 7; ++lag) {
    if (!history.has(k - lag))
      throw InsufficientHistory("lagged filter needs samples k-1..k-7");
  }
  return (c3 * (history.at(k - 3) - history.at(k - 5)) +
          c2 * (history.at(k - 2) - history.at(k - 6)) +
          c1 * (history.at(k - 1) - history.at(k - 7))) /
         denom;
}

}  // namespace

Eigen::VectorXd taylor6(const PositionHistory& history, int k) {
  return lagged_filter(history, k, 45.0, -9.0, 1.0, 60.0);
}

Eigen::VectorXd smooth_fir(const PositionHistory& history, int k) {
  return lagged_filter(history, k, 5.0, 4.0, 1.0, 32.0);
}

Eigen::VectorXd estimate_velocity(const PositionHistory& history, int k,
                                  VelocityMethod method, int dim,
                                  const Eigen::VectorXd* external_vdt) {
  if (method == VelocityMethod::external && external_vdt) return *external_vdt;
  try {
    switch (method) {
      case VelocityMethod::central:
        return central_diff(history, k);
      case VelocityMethod::taylor6:
        return taylor6(history, k);
      case VelocityMethod::smooth_fir:
        return smooth_fir(history, k);
      default:
        break;
    }
  } catch (const InsufficientHistory&) {
    // startup: zero-velocity prediction
  }
  return Eigen::VectorXd::Zero(dim);
}

}  // namespace locdyn
