#include "qcqkd/subtraction.hpp"

#include <fmt/format.h>

#include <cmath>

namespace qcqkd {

void SubtractionConfig::validate() const {
  if (!(t > 0.0 && t < 1.0)) {
    throw std::invalid_argument(
        fmt::format("subtraction transmittance must lie in (0, 1) (got {})", t));
  }
}

double ss_success_probability(const SubtractionConfig& cfg,
                              const SourceParams& src) {
  cfg.validate();
  const double l2 = src.lambda() * src.lambda();
  const double a2 = (1.0 - l2) * (1.0 - cfg.t) / cfg.t;
  const double b2 = l2 * cfg.t;
  const double d = 1.0 - b2;
  return a2 * b2 / (d * d);
}

TwoModeCovariance ss_output_covariance(const SubtractionConfig& cfg,
                                       const SourceParams& src) {
  cfg.validate();
  const double b = src.lambda() * std::sqrt(cfg.t);
  const double b2 = b * b;
  const double d = 1.0 - b2;
  TwoModeCovariance cov{(3.0 + b2) / d, (1.0 + 3.0 * b2) / d, 4.0 * b / d};
  cov.require_physical("subtraction output covariance");
  return cov;
}

double ss_log_negativity(const SubtractionConfig& cfg, const SourceParams& src) {
  cfg.validate();
  const double b = src.lambda() * std::sqrt(cfg.t);
  if (b == 0.0) return 0.0;  // limit state |1, 0> is a product state
  // Normalized e_l = (1 - b^2) sqrt(l) b^(l - 1), l >= 1.
  double sum = 0.0;
  double power = 1.0;
  for (int l = 1; l < 100000; ++l) {
    const double term = std::sqrt(static_cast<double>(l)) * power;
    sum += term;
    power *= b;
    if (term < 1e-17 * sum && l > 2) break;
  }
  return 2.0 * std::log2((1.0 - b * b) * sum);
}

double ss_optimal_transmittance(const SourceParams& src) {
  const double l2 = src.lambda() * src.lambda();
  return 2.0 - 1.0 / l2;
}

}  // namespace qcqkd
