#pragma once

// Brute-force reference in a truncated two-mode Fock space. Beamsplitter
// matrix elements come from a binomial expansion of the transformed creation
// operators; the heralded state is a dense amplitude matrix psi(i, j) over
// |i>_A |j>_B, and every figure of merit is recomputed from it directly
// (moments by summation, entanglement by SVD). Nothing here reuses the
// generating-function formulas of the analytic modules.

#include "qcqkd/catalysis.hpp"
#include "qcqkd/state.hpp"
#include "qcqkd/subtraction.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace qcqkd::oracle {

/// Beamsplitter phase convention. `standard` maps
///   b^dag -> sqrt(T) b^dag - sqrt(1-T) c^dag,
///   c^dag -> sqrt(1-T) b^dag + sqrt(T) c^dag,
/// so a single photon reflected from b into c picks up -sqrt(1-T).
/// `flipped` reverses both reflection signs.
enum class BeamSplitterSign { standard, flipped };

/// <out_b, out_c| B(t) |in_b, in_c>; zero when photon number is not conserved.
double bs_fock_amplitude(double t, int in_b, int in_c, int out_b, int out_c,
                         BeamSplitterSign sign = BeamSplitterSign::standard);

/// (N+1) x (N+1) block of B(t) in the sector with N photons in total; row
/// index out_b, column index in_b.
Eigen::MatrixXd bs_sector(double t, int total_photons,
                          BeamSplitterSign sign = BeamSplitterSign::standard);

/// Two-mode state psi(i, j) on |i>_A |j>_B with i, j <= cutoff.
struct FockState {
  Eigen::MatrixXd amplitudes;

  int cutoff() const { return static_cast<int>(amplitudes.rows()) - 1; }
  double norm_sq() const { return amplitudes.squaredNorm(); }
};

/// Truncated TMSV sqrt(1 - lambda^2) lambda^l on the diagonal.
FockState tmsv_fock_state(const SourceParams& src, int cutoff);

/// Smallest cutoff >= 60 with lambda^(2 cutoff) / (1 - lambda^2) < 1e-12 and
/// lambda^cutoff / (1 - lambda) < 1e-12.
int adaptive_cutoff(const SourceParams& src);

/// Covariance (1 + 2<a^dag a>, 1 + 2<b^dag b>, 2<ab>) of a normalized state.
TwoModeCovariance moments(const FockState& state);

/// 2 log2 of the sum of singular values of a normalized state.
double log_negativity(const FockState& state);

struct CatalysisSimulation {
  double pd = 0.0;
  std::vector<double> weights;  ///< normalized diagonal amplitudes w_l
  TwoModeCovariance covariance;
  double e_n = 0.0;
  int cutoff = 0;
};

/// Heralds m photons on mode A's ancilla and n on mode B's. Throws
/// NumericalError("cutoff too small") when the truncated mass could exceed
/// 1e-8 of the heralded probability.
CatalysisSimulation simulate_catalysis(
    const CatalysisConfig& cfg, const SourceParams& src,
    std::optional<int> cutoff = std::nullopt,
    BeamSplitterSign sign = BeamSplitterSign::standard);

struct SubtractionSimulation {
  double p1 = 0.0;
  TwoModeCovariance covariance;  ///< vacuum values when p1 == 0
  double e_n = 0.0;
  int cutoff = 0;
};

/// Vacuum ancilla on mode B, one photon heralded.
SubtractionSimulation simulate_subtraction(
    const SubtractionConfig& cfg, const SourceParams& src,
    std::optional<int> cutoff = std::nullopt,
    BeamSplitterSign sign = BeamSplitterSign::standard);

}  // namespace qcqkd::oracle
