#include "qcqkd/optimize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace qcqkd {

namespace {

constexpr double kSubtractionTMax = 1.0 - 1e-6;
constexpr double kMaxSearchDistanceKm = 5000.0;
constexpr int kSpotChecks = 4;

double raw_rate_at(const TunableProtocol& p, const ChannelParams& ch, double t) {
  return secret_key_rate(p.at(t), ch).raw_rate;
}

TransmittanceOptimum finish(const TunableProtocol& p, const ChannelParams& ch,
                            double t, bool all_zero) {
  const auto r = secret_key_rate(p.at(t), ch);
  return {t, r.key_rate, r.raw_rate, all_zero};
}

}  // namespace

double TunableScheme::max_transmittance() const {
  return family == SchemeFamily::subtraction ? kSubtractionTMax : 1.0;
}

Scheme TunableScheme::at(double t) const {
  switch (family) {
    case SchemeFamily::original:
      return OriginalScheme{};
    case SchemeFamily::bsqc:
      return CatalysisConfig::bilateral(photons, t);
    case SchemeFamily::ssqc:
      return CatalysisConfig::single_side(photons, t);
    case SchemeFamily::subtraction:
      return SubtractionConfig{t};
  }
  throw std::logic_error("unknown scheme family");
}

std::string TunableScheme::name() const {
  switch (family) {
    case SchemeFamily::original:
      return "original";
    case SchemeFamily::bsqc:
      return fmt::format("bsqc{}", photons);
    case SchemeFamily::ssqc:
      return fmt::format("ssqc{}", photons);
    case SchemeFamily::subtraction:
      return "subtraction";
  }
  return "unknown";
}

ScalarOptimum maximize_on_interval(const std::function<double(double)>& f,
                                   double lo, double hi, double grid_step,
                                   double tolerance) {
  if (!(lo <= hi) || !(grid_step > 0.0) || !(tolerance > 0.0)) {
    throw std::invalid_argument("invalid search interval");
  }
  std::vector<double> grid;
  const int cells =
      static_cast<int>(std::ceil((hi - lo) / grid_step - 1e-9));
  for (int i = 0; i <= cells; ++i) {
    grid.push_back(std::min(hi, lo + i * grid_step));
  }
  std::vector<double> values(grid.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = f(grid[i]);
    if (values[i] > values[best]) best = i;
  }
  ScalarOptimum result{grid[best], values[best], values[best]};

  double a = grid[best == 0 ? 0 : best - 1];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  if (b - a <= tolerance) return result;
  constexpr double kInvPhi = 1.0 / std::numbers::phi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  for (const auto& [x, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v > result.value) {
      result.x = x;
      result.value = v;
    }
  }
  return result;
}

TransmittanceOptimum optimize_transmittance(const TunableProtocol& p,
                                            const ChannelParams& ch,
                                            const TransmittanceSearch& search) {
  if (!p.scheme.has_transmittance()) {
    return finish(p, ch, 1.0, false);
  }
  const double lo = search.t_min;
  const double hi = std::min(search.t_max, p.scheme.max_transmittance());
  if (!(lo > 0.0 && lo <= hi)) {
    throw std::invalid_argument("invalid transmittance search range");
  }
  // The unclamped rate keeps the landscape informative below zero.
  const auto best = maximize_on_interval(
      [&](double t) { return raw_rate_at(p, ch, t); }, lo, hi,
      search.grid_step, search.tolerance);
  return finish(p, ch, best.x, best.best_grid_value <= 0.0 && best.value <= 0.0);
}

ExcessNoiseResult max_tolerable_excess_noise(const TunableProtocol& p,
                                             double distance_km,
                                             const SearchOptions& opts) {
  const double tc = channel_transmittance(distance_km, opts.atten_db_per_km);
  auto optimum = [&](double eps) {
    return optimize_transmittance(p, {tc, eps}, opts.transmittance);
  };
  auto positive = [&](double eps) { return optimum(eps).raw_rate > 0.0; };

  if (!positive(0.0)) return {0.0, optimum(0.0).t_opt, true};
  if (positive(kMaxExcessNoise)) {
    return {kMaxExcessNoise, optimum(kMaxExcessNoise).t_opt, true};
  }

  double lo = 0.0;
  double hi = kMaxExcessNoise;
  while (hi - lo > kExcessNoiseTolerance) {
    const double mid = 0.5 * (lo + hi);
    (positive(mid) ? lo : hi) = mid;
  }

  // Bisection presumes the rate falls monotonically in epsilon; spot-check
  // both sides of the boundary and fall back to a full scan if that fails.
  bool monotone = true;
  for (int i = 1; i <= kSpotChecks && monotone; ++i) {
    const double below = lo * i / (kSpotChecks + 1);
    const double above = hi + (kMaxExcessNoise - hi) * i / (kSpotChecks + 1);
    monotone = positive(below) && !positive(above);
  }
  if (!monotone) {
    lo = 0.0;
    for (double eps = 0.0; eps <= kMaxExcessNoise; eps += 1e-4) {
      if (positive(eps)) lo = eps;
    }
  }
  return {lo, optimum(lo).t_opt, monotone};
}

DistanceResult max_distance(const TunableProtocol& p, double epsilon,
                            double floor, const SearchOptions& opts) {
  if (!(floor > 0.0)) {
    throw std::invalid_argument("key-rate floor must be positive");
  }
  auto optimum = [&](double d) {
    return optimize_transmittance(
        p, ChannelParams::from_distance(d, epsilon, opts.atten_db_per_km),
        opts.transmittance);
  };
  auto above = [&](double d) { return optimum(d).key_rate >= floor; };

  if (!above(0.0)) return {0.0, optimum(0.0).t_opt, true};
  double lo = 0.0;
  double hi = 50.0;
  while (above(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kMaxSearchDistanceKm) {
      return {kMaxSearchDistanceKm, optimum(kMaxSearchDistanceKm).t_opt, true};
    }
  }
  while (hi - lo > kDistanceResolutionKm) {
    const double mid = 0.5 * (lo + hi);
    (above(mid) ? lo : hi) = mid;
  }

  bool monotone = true;
  for (int i = 1; i <= kSpotChecks && monotone; ++i) {
    const double before = lo * i / (kSpotChecks + 1);
    const double after = hi + 10.0 * i;
    monotone = above(before) && !above(after);
  }
  if (!monotone) {
    const double scan_end = std::min(kMaxSearchDistanceKm, 2.0 * hi + 100.0);
    lo = 0.0;
    for (double d = 0.0; d <= scan_end; d += kDistanceResolutionKm) {
      if (above(d)) lo = d;
    }
  }
  return {lo, optimum(lo).t_opt, monotone};
}

}  // namespace qcqkd
