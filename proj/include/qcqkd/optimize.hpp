#pragma once

// Outer searches over the free transmittance of Alice's stations: best T for
// a given channel, largest tolerable excess noise, and longest distance
// above a key-rate floor. All searches run on the analytic pipeline.

#include "qcqkd/keyrate.hpp"

#include <functional>
#include <string>

namespace qcqkd {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  double best_grid_value = 0.0;  ///< best value seen on the coarse grid
};

/// Maximizes f on [lo, hi]: coarse grid with spacing `grid_step`, then
/// golden-section refinement to `tolerance` inside the two grid cells around
/// the best grid point. Handles multimodal f as long as the global peak is
/// resolved by the grid.
ScalarOptimum maximize_on_interval(const std::function<double(double)>& f,
                                   double lo, double hi, double grid_step,
                                   double tolerance);

enum class SchemeFamily { original, bsqc, ssqc, subtraction };

/// A scheme with its transmittance left open.
struct TunableScheme {
  SchemeFamily family = SchemeFamily::original;
  int photons = 0;  ///< m = n for bsqc, n for ssqc; ignored otherwise

  bool has_transmittance() const { return family != SchemeFamily::original; }
  /// Largest admissible T (subtraction excludes T = 1).
  double max_transmittance() const;
  Scheme at(double t) const;
  std::string name() const;
};

struct TunableProtocol {
  TunableScheme scheme;
  double beta = 0.95;
  SourceParams src = SourceParams::from_variance(20.0);

  ProtocolParams at(double t) const { return {beta, src, scheme.at(t)}; }
};

struct TransmittanceSearch {
  double t_min = 0.5;
  double t_max = 1.0;
  double grid_step = 0.005;
  double tolerance = 1e-4;
};

struct TransmittanceOptimum {
  double t_opt = 1.0;
  double key_rate = 0.0;  ///< clamped rate at t_opt
  double raw_rate = 0.0;  ///< unclamped rate at t_opt
  bool all_zero = false;  ///< no T on the grid gave a positive rate
};

/// Coarse grid over [t_min, t_max] followed by golden-section refinement in
/// the two cells around the best grid point. The unclamped rate is the
/// objective so that a meaningful T is returned even when every rate is 0.
/// For the original scheme returns T = 1 and the plain rate.
TransmittanceOptimum optimize_transmittance(const TunableProtocol& p,
                                            const ChannelParams& ch,
                                            const TransmittanceSearch& search = {});

struct SearchOptions {
  double atten_db_per_km = kDefaultAttenuationDbPerKm;
  TransmittanceSearch transmittance;
};

struct ExcessNoiseResult {
  double epsilon_max = 0.0;
  double t_opt = 1.0;     ///< optimal T at epsilon_max
  bool monotone = true;   ///< false when the grid-scan fallback was used
};

inline constexpr double kMaxExcessNoise = 0.2;
inline constexpr double kExcessNoiseTolerance = 1e-5;

/// Largest epsilon in [0, 0.2] with a positive optimized key rate, to 1e-5.
ExcessNoiseResult max_tolerable_excess_noise(const TunableProtocol& p,
                                             double distance_km,
                                             const SearchOptions& opts = {});

struct DistanceResult {
  double distance_km = 0.0;
  double t_opt = 1.0;
  bool monotone = true;
};

inline constexpr double kDefaultRateFloor = 1e-6;
inline constexpr double kDistanceResolutionKm = 0.1;

/// Largest distance whose optimized key rate stays >= floor, to 0.1 km.
DistanceResult max_distance(const TunableProtocol& p, double epsilon,
                            double floor = kDefaultRateFloor,
                            const SearchOptions& opts = {});

}  // namespace qcqkd
