#include "qcqkd/catalysis.hpp"

#include "qcqkd/series.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace qcqkd {

namespace {

enum Var : std::size_t { kTau = 0, kGamma = 1, kTau1 = 2, kGamma1 = 3 };

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Squared normalization T1^m T2^n (1 - lambda^2) / (n! m!)^2 that multiplies
// every derivative functional of the catalyzed state.
double prefactor_sq(const CatalysisConfig& cfg, const SourceParams& src) {
  const double lam = src.lambda();
  const double fm = factorial(cfg.m) * factorial(cfg.n);
  return std::pow(cfg.t1, cfg.m) * std::pow(cfg.t2, cfg.n) *
         (1.0 - lam * lam) / (fm * fm);
}

// lambda (t2 - g)(t1 - t) / (sqrt(t1 t2) (1 - g)(1 - t)) for one ket/bra side.
JetD catalysis_ratio(const JetD& tau, const JetD& gamma,
                     const CatalysisConfig& cfg, double lambda) {
  const double scale = lambda / std::sqrt(cfg.t1 * cfg.t2);
  return scale * (cfg.t2 - gamma) * (cfg.t1 - tau) /
         ((1.0 - gamma) * (1.0 - tau));
}

}  // namespace

void CatalysisConfig::validate() const {
  if (m < 0 || n < 0 || m > kMaxCatalysisPhotons || n > kMaxCatalysisPhotons) {
    throw std::invalid_argument(fmt::format(
        "catalysis photon numbers must lie in [0, {}] (got m={}, n={})",
        kMaxCatalysisPhotons, m, n));
  }
  if (!(t1 > 0.0 && t1 <= 1.0) || !(t2 > 0.0 && t2 <= 1.0)) {
    throw std::invalid_argument(fmt::format(
        "catalysis transmittances must lie in (0, 1] (got t1={}, t2={})", t1,
        t2));
  }
}

double SchmidtSpectrum::norm_sq() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0,
                         [](double acc, double w) { return acc + w * w; });
}

CatalyzedState catalyzed_state(const CatalysisConfig& cfg,
                               const SourceParams& src) {
  cfg.validate();
  const JetD::Orders orders{cfg.m, cfg.n, cfg.m, cfg.n};
  const std::array<int, 4> deriv{cfg.m, cfg.n, cfg.m, cfg.n};

  const auto tau = JetD::variable_or_zero(kTau, orders);
  const auto gamma = JetD::variable_or_zero(kGamma, orders);
  const auto tau1 = JetD::variable_or_zero(kTau1, orders);
  const auto gamma1 = JetD::variable_or_zero(kGamma1, orders);

  const auto ket = catalysis_ratio(tau, gamma, cfg, src.lambda());
  const auto bra = catalysis_ratio(tau1, gamma1, cfg, src.lambda());
  const auto pi =
      1.0 / ((1.0 - tau) * (1.0 - gamma) * (1.0 - tau1) * (1.0 - gamma1));
  const auto resolvent = 1.0 / (1.0 - bra * ket);
  const auto pi_res = pi * resolvent;
  const auto pi_res2 = pi_res * resolvent;

  const double w0_sq = prefactor_sq(cfg, src);
  const double pd = w0_sq * mixed_partial_at_zero(pi_res, deriv);
  if (!(pd > 0.0 && pd <= 1.0 + 1e-9)) {
    throw NumericalError(
        fmt::format("success probability {:.12g} outside (0, 1]", pd));
  }

  const double x =
      2.0 * w0_sq / pd * mixed_partial_at_zero(pi_res2, deriv) - 1.0;
  const double z = 2.0 * w0_sq / pd * mixed_partial_at_zero(pi_res2 * ket, deriv);

  CatalyzedState state{pd, {x, x, z}};
  state.covariance.require_physical("catalysis output covariance");
  return state;
}

double success_probability(const CatalysisConfig& cfg, const SourceParams& src) {
  return catalyzed_state(cfg, src).success_probability;
}

TwoModeCovariance output_covariance(const CatalysisConfig& cfg,
                                    const SourceParams& src) {
  return catalyzed_state(cfg, src).covariance;
}

SchmidtSpectrum schmidt_spectrum(const CatalysisConfig& cfg,
                                 const SourceParams& src, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("Schmidt tolerance must be positive");
  }
  const double pd = success_probability(cfg, src);

  // Only the ket-side variables (tau, gamma) enter a single amplitude.
  const JetD::Orders orders{cfg.m, cfg.n};
  const std::array<int, 2> deriv{cfg.m, cfg.n};
  const auto tau = JetD::variable_or_zero(0, orders);
  const auto gamma = JetD::variable_or_zero(1, orders);
  const auto ratio = catalysis_ratio(tau, gamma, cfg, src.lambda());
  const auto base = 1.0 / ((1.0 - tau) * (1.0 - gamma));
  const double scale = std::sqrt(prefactor_sq(cfg, src) / pd);

  // |w_l| ~ poly(l) * lambda_eff^l asymptotically.
  const double lambda_eff_sq =
      src.lambda() * src.lambda() * cfg.t1 * cfg.t2;
  const int poly_degree = 2 * (cfg.m + cfg.n);
  constexpr double kAbsTailTol = 1e-12;

  SchmidtSpectrum spectrum;
  auto power = JetD::constant(1.0, orders);
  for (int l = 0; l <= kSchmidtHardCap; ++l) {
    const double w = scale * mixed_partial_at_zero(power * base, deriv);
    spectrum.weights.push_back(w);
    power = power * ratio;

    const int min_terms = std::max(3, poly_degree + 2);
    if (l + 1 < min_terms) continue;

    const auto& ws = spectrum.weights;
    const std::size_t k = ws.size();
    // Empirical ratio test over the last three steps, floored by the
    // asymptotic envelope ratio.
    double r = lambda_eff_sq *
               std::pow(static_cast<double>(l + 1) / l, poly_degree);
    bool decaying = true;
    for (std::size_t j = k - 3; j + 1 < k; ++j) {
      if (ws[j] == 0.0) continue;
      const double rj = (ws[j + 1] * ws[j + 1]) / (ws[j] * ws[j]);
      if (rj >= 1.0) decaying = false;
      r = std::max(r, rj);
    }
    if (!decaying || r >= 1.0) continue;

    const double amp = std::max({std::abs(ws[k - 1]), std::abs(ws[k - 2]),
                                 std::abs(ws[k - 3])});
    const double tail_sq = amp * amp * r / (1.0 - r);
    const double sr = std::sqrt(r);
    const double tail_abs = amp * sr / (1.0 - sr);
    if (tail_sq < tol && tail_abs < kAbsTailTol) {
      spectrum.cutoff = l;
      spectrum.tail_bound = tail_sq;
      return spectrum;
    }
  }
  throw NumericalError(fmt::format(
      "Schmidt series did not converge within {} terms", kSchmidtHardCap));
}

double log_negativity(const SchmidtSpectrum& spectrum) {
  double sum = 0.0;
  for (const double w : spectrum.weights) sum += std::abs(w);
  return 2.0 * std::log2(sum);
}

double log_negativity(const CatalysisConfig& cfg, const SourceParams& src) {
  return log_negativity(schmidt_spectrum(cfg, src));
}

double log_negativity_tmsv(const SourceParams& src) {
  const double lam = src.lambda();
  return std::log2((1.0 + lam) / (1.0 - lam));
}

double log_negativity_tmsv_closed_form(const SourceParams& src) {
  const double a = src.alpha();
  const double a2 = 1.0 + a * a;
  return -std::log2(a2) - 2.0 * std::log2(std::sqrt(a2) - a);
}

}  // namespace qcqkd
