#pragma once

// Asymptotic key rate for reverse reconciliation under collective attacks,
// heterodyne detection at Alice and homodyne detection at Bob. Non-Gaussian
// states are replaced by the Gaussian state with the same covariance, which
// lower-bounds the rate.

#include "qcqkd/catalysis.hpp"
#include "qcqkd/state.hpp"
#include "qcqkd/subtraction.hpp"

#include <string>
#include <variant>

namespace qcqkd {

inline constexpr double kDefaultAttenuationDbPerKm = 0.2;

/// T_c = 10^(-atten * d / 10).
double channel_transmittance(double distance_km,
                             double atten_db_per_km = kDefaultAttenuationDbPerKm);

struct ChannelParams {
  double tc = 1.0;       ///< transmission efficiency, in (0, 1]
  double epsilon = 0.0;  ///< excess noise, shot-noise units at channel input

  static ChannelParams from_distance(
      double distance_km, double epsilon,
      double atten_db_per_km = kDefaultAttenuationDbPerKm) {
    return {channel_transmittance(distance_km, atten_db_per_km), epsilon};
  }

  /// Channel-added noise referred to the input: (1 - tc)/tc + epsilon.
  double xi() const { return (1.0 - tc) / tc + epsilon; }

  void validate() const;
};

/// (x, y, z) -> (x, tc (y + xi), sqrt(tc) z).
TwoModeCovariance propagate_covariance(const TwoModeCovariance& cov,
                                       const ChannelParams& ch);

/// I(A:B) = log2 sqrt((x+1)(y+xi) / ((x+1)(y+xi) - z^2)) in bits, written in
/// terms of the *pre-channel* covariance and the channel noise xi.
double mutual_information(const TwoModeCovariance& pre_channel, double xi);

/// G(x) = (x+1) log2(x+1) - x log2 x, with G(0) = 0.
double von_neumann_g(double x);

struct SymplecticSpectrum {
  double nu1 = 1.0;  ///< larger eigenvalue of the two-mode state
  double nu2 = 1.0;  ///< smaller eigenvalue of the two-mode state
  double nu3 = 1.0;  ///< Alice's mode conditioned on Bob's homodyne outcome
};

/// Symplectic spectrum of the post-channel state built from pre-channel
/// (x, y, z), tc and xi.
SymplecticSpectrum symplectic_eigenvalues(double x, double y, double z,
                                          double tc, double xi);

struct OriginalScheme {};

using Scheme = std::variant<OriginalScheme, CatalysisConfig, SubtractionConfig>;

std::string scheme_name(const Scheme& scheme);

struct ProtocolParams {
  double beta = 0.95;  ///< reconciliation efficiency, in (0, 1]
  SourceParams src = SourceParams::from_variance(20.0);
  Scheme scheme = OriginalScheme{};

  void validate() const;
};

/// Heralding probability and covariance of the state Alice distributes.
struct PreparedState {
  double p_success = 1.0;
  TwoModeCovariance covariance;
};

PreparedState prepare_state(const ProtocolParams& p);

struct KeyRateResult {
  double p_success = 0.0;
  double i_ab = 0.0;
  double holevo = 0.0;
  double raw_rate = 0.0;  ///< p_success (beta I_AB - holevo), may be negative
  double key_rate = 0.0;  ///< max(0, raw_rate)
  SymplecticSpectrum symplectic;
};

KeyRateResult secret_key_rate(const ProtocolParams& p, const ChannelParams& ch);

/// Same evaluation for an already prepared state.
KeyRateResult secret_key_rate(const PreparedState& state, double beta,
                              const ChannelParams& ch);

/// Repeaterless secret-key capacity -log2(1 - tc).
double plob_bound(double tc);

}  // namespace qcqkd
