#pragma once

// Photon-catalyzed two-mode squeezed vacuum.
//
// Alice mixes mode A with an m-photon ancilla on a beamsplitter of
// transmittance t1 and mode B with an n-photon ancilla on a beamsplitter of
// transmittance t2, keeping the run only when the ancilla detectors again
// register m and n photons. The output stays in Schmidt form
//   |psi> = sum_l w_l |l, l>,
// and every quantity below is obtained from derivative functionals of
// rational generating functions in the auxiliary variables (tau, gamma) and
// their bra-side copies (tau1, gamma1), evaluated with truncated jets.

#include "qcqkd/state.hpp"

#include <vector>

namespace qcqkd {

inline constexpr int kMaxCatalysisPhotons = 5;

struct CatalysisConfig {
  int m = 0;        ///< ancilla photons on mode A
  int n = 0;        ///< ancilla photons on mode B
  double t1 = 1.0;  ///< transmittance of mode-A beamsplitter, in (0, 1]
  double t2 = 1.0;  ///< transmittance of mode-B beamsplitter, in (0, 1]

  /// Bilateral symmetric catalysis: m = n = photons, t1 = t2 = t.
  static CatalysisConfig bilateral(int photons, double t) {
    return {photons, photons, t, t};
  }
  /// Single-side catalysis on mode B only: t1 = 1, m = 0.
  static CatalysisConfig single_side(int photons, double t) {
    return {0, photons, 1.0, t};
  }

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

struct CatalyzedState {
  double success_probability = 0.0;
  TwoModeCovariance covariance;
};

struct SchmidtSpectrum {
  std::vector<double> weights;  ///< signed w_l, l = 0..cutoff
  int cutoff = 0;
  double tail_bound = 0.0;      ///< estimated discarded sum of w_l^2

  double norm_sq() const;
};

/// Pd together with the output covariance; shares one jet evaluation.
CatalyzedState catalyzed_state(const CatalysisConfig& cfg,
                               const SourceParams& src);

double success_probability(const CatalysisConfig& cfg, const SourceParams& src);

/// (X_A, Y_B, Z_AB) of the catalyzed state; Y_B = X_A.
TwoModeCovariance output_covariance(const CatalysisConfig& cfg,
                                    const SourceParams& src);

inline constexpr double kDefaultSchmidtTolerance = 1e-14;
inline constexpr int kSchmidtHardCap = 2048;

/// Schmidt weights w_l, extended until the estimated tail of sum w_l^2
/// drops below `tol` (and the tail of sum |w_l| below 1e-9).
SchmidtSpectrum schmidt_spectrum(const CatalysisConfig& cfg,
                                 const SourceParams& src,
                                 double tol = kDefaultSchmidtTolerance);

/// Logarithmic negativity 2 log2(sum_l |w_l|) of a pure Schmidt-form state.
/// Coincides with 2 log2 |sum_l w_l| whenever the weights share a sign.
double log_negativity(const SchmidtSpectrum& spectrum);

/// Convenience: log_negativity(schmidt_spectrum(cfg, src)).
double log_negativity(const CatalysisConfig& cfg, const SourceParams& src);

/// Schmidt-sum value for the plain TMSV: log2((1 + lambda)/(1 - lambda)).
double log_negativity_tmsv(const SourceParams& src);

/// The literature closed form
///   -log2(1 + alpha^2) - 2 log2(sqrt(1 + alpha^2) - alpha),
/// which simplifies to 2 log2(1 + lambda). Reported next to the Schmidt sum;
/// it does not equal log_negativity_tmsv.
double log_negativity_tmsv_closed_form(const SourceParams& src);

}  // namespace qcqkd
