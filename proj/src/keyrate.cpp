#include "qcqkd/keyrate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcqkd {

namespace {

constexpr double kEigenTol = 1e-9;
constexpr double kDiscriminantTol = 1e-12;

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double checked_eigenvalue(double nu_sq, const char* which) {
  const double nu = std::sqrt(std::max(nu_sq, 0.0));
  if (!(nu >= 1.0 - kEigenTol)) {
    throw NumericalError(fmt::format(
        "unphysical state: symplectic eigenvalue {} = {:.12g} < 1", which, nu));
  }
  return std::max(nu, 1.0);
}

}  // namespace

double channel_transmittance(double distance_km, double atten_db_per_km) {
  if (!(distance_km >= 0.0)) {
    throw std::invalid_argument("distance must be >= 0");
  }
  if (!(atten_db_per_km > 0.0)) {
    throw std::invalid_argument("attenuation must be > 0 dB/km");
  }
  return std::pow(10.0, -atten_db_per_km * distance_km / 10.0);
}

void ChannelParams::validate() const {
  if (!(tc > 0.0 && tc <= 1.0)) {
    throw std::invalid_argument(
        fmt::format("channel transmittance must lie in (0, 1] (got {})", tc));
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument(
        fmt::format("excess noise must be >= 0 (got {})", epsilon));
  }
}

TwoModeCovariance propagate_covariance(const TwoModeCovariance& cov,
                                       const ChannelParams& ch) {
  ch.validate();
  TwoModeCovariance out{cov.x, ch.tc * (cov.y + ch.xi()),
                        std::sqrt(ch.tc) * cov.z};
  out.require_physical("propagated covariance");
  return out;
}

double mutual_information(const TwoModeCovariance& pre_channel, double xi) {
  const double total = (pre_channel.x + 1.0) * (pre_channel.y + xi);
  const double q = pre_channel.z * pre_channel.z / total;
  if (!(total > 0.0) || !(q < 1.0)) {
    throw NumericalError("conditional variance non-positive");
  }
  return -0.5 * log2_1p(-q);
}

double von_neumann_g(double x) {
  if (x < -1e-9) {
    throw std::domain_error(
        fmt::format("von Neumann entropy argument {} is negative", x));
  }
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

SymplecticSpectrum symplectic_eigenvalues(double x, double y, double z,
                                          double tc, double xi) {
  const double a = x;
  const double b = tc * (y + xi);
  const double c2 = tc * z * z;
  const double big_lambda = a * a + b * b - 2.0 * c2;
  const double d = a * b - c2;
  double disc = big_lambda * big_lambda - 4.0 * d * d;
  if (disc < 0.0) {
    if (disc < -kDiscriminantTol * big_lambda * big_lambda) {
      throw NumericalError(fmt::format(
          "unphysical state: negative symplectic discriminant {:.6g}", disc));
    }
    disc = 0.0;
  }
  const double nu1_sq = 0.5 * (big_lambda + std::sqrt(disc));
  // nu1^2 nu2^2 = D^2; dividing avoids the cancellation in Lambda - sqrt(.).
  const double nu2_sq = nu1_sq > 0.0 ? d * d / nu1_sq : 0.0;
  const double nu3_sq = x * (x - z * z / (y + xi));
  return {checked_eigenvalue(nu1_sq, "nu1"), checked_eigenvalue(nu2_sq, "nu2"),
          checked_eigenvalue(nu3_sq, "nu3")};
}

std::string scheme_name(const Scheme& scheme) {
  struct Visitor {
    std::string operator()(const OriginalScheme&) const { return "original"; }
    std::string operator()(const CatalysisConfig& c) const {
      if (c.t1 == 1.0 && c.m == 0) return "ssqc";
      if (c.t1 == c.t2 && c.m == c.n) return "bsqc";
      return "catalysis";
    }
    std::string operator()(const SubtractionConfig&) const {
      return "subtraction";
    }
  };
  return std::visit(Visitor{}, scheme);
}

void ProtocolParams::validate() const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument(fmt::format(
        "reconciliation efficiency must lie in (0, 1] (got {})", beta));
  }
}

PreparedState prepare_state(const ProtocolParams& p) {
  p.validate();
  struct Visitor {
    const SourceParams& src;
    PreparedState operator()(const OriginalScheme&) const {
      return {1.0, tmsv_covariance(src)};
    }
    PreparedState operator()(const CatalysisConfig& c) const {
      const auto state = catalyzed_state(c, src);
      return {state.success_probability, state.covariance};
    }
    PreparedState operator()(const SubtractionConfig& c) const {
      return {ss_success_probability(c, src), ss_output_covariance(c, src)};
    }
  };
  return std::visit(Visitor{p.src}, p.scheme);
}

KeyRateResult secret_key_rate(const PreparedState& state, double beta,
                              const ChannelParams& ch) {
  ch.validate();
  const double xi = ch.xi();
  const auto& cov = state.covariance;

  KeyRateResult r;
  r.p_success = state.p_success;
  r.i_ab = mutual_information(cov, xi);
  r.symplectic = symplectic_eigenvalues(cov.x, cov.y, cov.z, ch.tc, xi);
  r.holevo = von_neumann_g((r.symplectic.nu1 - 1.0) / 2.0) +
             von_neumann_g((r.symplectic.nu2 - 1.0) / 2.0) -
             von_neumann_g((r.symplectic.nu3 - 1.0) / 2.0);
  r.raw_rate = r.p_success * (beta * r.i_ab - r.holevo);
  r.key_rate = std::max(0.0, r.raw_rate);
  return r;
}

KeyRateResult secret_key_rate(const ProtocolParams& p, const ChannelParams& ch) {
  return secret_key_rate(prepare_state(p), p.beta, ch);
}

double plob_bound(double tc) {
  if (tc >= 1.0) {
    throw std::domain_error("infinite capacity");
  }
  if (!(tc > 0.0)) {
    throw std::invalid_argument("channel transmittance must be positive");
  }
  return -log2_1p(-tc);
}

}  // namespace qcqkd
