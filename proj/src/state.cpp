#include "qcqkd/state.hpp"

#include <fmt/format.h>

#include <cmath>

namespace qcqkd {

SourceParams SourceParams::from_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("alpha must be finite and >= 0");
  }
  return SourceParams(alpha, alpha / std::sqrt(1.0 + alpha * alpha));
}

SourceParams SourceParams::from_variance(double variance) {
  if (!(variance >= 1.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("variance must be finite and >= 1");
  }
  return from_alpha(std::sqrt((variance - 1.0) / 2.0));
}

SourceParams SourceParams::from_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1)");
  }
  // alpha = lambda / sqrt(1 - lambda^2); keep lambda exact.
  return SourceParams(lambda / std::sqrt(1.0 - lambda * lambda), lambda);
}

Eigen::Matrix4d TwoModeCovariance::to_matrix() const {
  Eigen::Matrix4d gamma = Eigen::Matrix4d::Zero();
  gamma(0, 0) = gamma(1, 1) = x;
  gamma(2, 2) = gamma(3, 3) = y;
  gamma(0, 2) = gamma(2, 0) = z;
  gamma(1, 3) = gamma(3, 1) = -z;
  return gamma;
}

void TwoModeCovariance::require_physical(const std::string& what,
                                         double tol) const {
  if (!is_physical(tol)) {
    throw NumericalError(fmt::format(
        "{}: unphysical covariance (x={:.12g}, y={:.12g}, z={:.12g}, xy-z^2={:.12g})",
        what, x, y, z, det_block()));
  }
}

TwoModeCovariance tmsv_covariance(const SourceParams& src) {
  const double v = src.variance();
  return {v, v, std::sqrt(v * v - 1.0)};
}

TwoModeCovariance tmsv_covariance_from_lambda(double lambda) {
  const double l2 = lambda * lambda;
  const double x = (1.0 + l2) / (1.0 - l2);
  return {x, x, 2.0 * lambda / (1.0 - l2)};
}

}  // namespace qcqkd
