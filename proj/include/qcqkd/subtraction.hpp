#pragma once

// Single-photon subtraction on mode B of the TMSV: a vacuum ancilla meets
// mode B on a beamsplitter of transmittance t and one photon is heralded in
// the ancilla. With A^2 = (1 - lambda^2)(1 - t)/t and B^2 = lambda^2 t the
// heralded state is sum_l e_l |l, l - 1>, e_l proportional to sqrt(l) B^(l-1).

#include "qcqkd/state.hpp"

namespace qcqkd {

struct SubtractionConfig {
  double t = 0.9;  ///< beamsplitter transmittance, in (0, 1)

  void validate() const;
};

/// P1 = A^2 B^2 / (1 - B^2)^2.
double ss_success_probability(const SubtractionConfig& cfg,
                              const SourceParams& src);

/// X = (3 + B^2)/(1 - B^2), Y = (1 + 3 B^2)/(1 - B^2), Z = 4 B/(1 - B^2),
/// the heralded-state moments with P1 already divided out.
TwoModeCovariance ss_output_covariance(const SubtractionConfig& cfg,
                                       const SourceParams& src);

/// 2 log2 sum_l |e_l| for the normalized subtracted state.
double ss_log_negativity(const SubtractionConfig& cfg, const SourceParams& src);

/// Transmittance 2 - 1/lambda^2 maximizing P1 (only meaningful for
/// lambda^2 > 1/2, where the maximum equals 1/4).
double ss_optimal_transmittance(const SourceParams& src);

}  // namespace qcqkd
