#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace qcqkd {

/// Raised when a computed quantity violates a physical invariant
/// (probability outside (0,1], covariance below the uncertainty bound,
/// non-convergent series). Distinct from std::invalid_argument, which flags
/// bad inputs.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-mode squeezed vacuum source. The squeezing is stored as the amplitude
/// alpha with modulation variance V = 2 alpha^2 + 1 and Schmidt ratio
/// lambda = tanh r = sqrt((V - 1)/(V + 1)) = alpha / sqrt(1 + alpha^2).
class SourceParams {
 public:
  static SourceParams from_alpha(double alpha);
  static SourceParams from_variance(double variance);
  static SourceParams from_lambda(double lambda);

  double alpha() const { return alpha_; }
  double lambda() const { return lambda_; }
  double variance() const { return 2.0 * alpha_ * alpha_ + 1.0; }

 private:
  SourceParams(double alpha, double lambda) : alpha_(alpha), lambda_(lambda) {}

  double alpha_ = 0.0;
  double lambda_ = 0.0;
};

/// Covariance matrix of a two-mode state in standard form
///   ( x I    z Z )
///   ( z Z    y I ),   I = diag(1,1), Z = diag(1,-1),
/// in shot-noise units.
struct TwoModeCovariance {
  double x = 1.0;
  double y = 1.0;
  double z = 0.0;

  /// x y - z^2; >= 1 for every physical state in this family.
  double det_block() const { return x * y - z * z; }

  bool is_physical(double tol = 1e-9) const {
    return x >= 1.0 - tol && y >= 1.0 - tol && det_block() >= 1.0 - tol;
  }

  /// Full 4x4 matrix in (x_A, p_A, x_B, p_B) ordering.
  Eigen::Matrix4d to_matrix() const;

  /// Throws NumericalError naming `what` when the matrix is unphysical.
  void require_physical(const std::string& what, double tol = 1e-9) const;
};

/// Covariance of the TMSV itself: X = Y = V, Z = sqrt(V^2 - 1).
TwoModeCovariance tmsv_covariance(const SourceParams& src);

/// TMSV covariance written through an effective Schmidt ratio:
/// X = (1 + l^2)/(1 - l^2), Z = 2 l/(1 - l^2).
TwoModeCovariance tmsv_covariance_from_lambda(double lambda);

}  // namespace qcqkd
