#include "qcqkd/oracle.hpp"

#include <Eigen/SVD>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace qcqkd::oracle {

namespace {

constexpr int kMinCutoff = 60;
constexpr double kTailTolerance = 1e-8;

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// k * log(v), with 0 * log(0) = 0.
double power_log(int k, double v) { return k == 0 ? 0.0 : k * std::log(v); }

// Single-mode operator on the signal: op(k, l) = <k, anc_out| B |l, anc_in>.
Eigen::MatrixXd heralding_operator(double t, int anc_in, int anc_out,
                                   int cutoff, BeamSplitterSign sign) {
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(cutoff + 1, cutoff + 1);
  for (int l = 0; l <= cutoff; ++l) {
    const int k = l + anc_in - anc_out;
    if (k < 0 || k > cutoff) continue;
    op(k, l) = bs_fock_amplitude(t, l, anc_in, k, anc_out, sign);
  }
  return op;
}

void require_cutoff(const SourceParams& src, int cutoff, double probability) {
  if (cutoff < 1) {
    throw std::invalid_argument("cutoff must be >= 1");
  }
  // Beamsplitter amplitudes are bounded by 1, so the heralded mass lost to
  // truncation is at most the TMSV mass above the cutoff.
  const double discarded = std::pow(src.lambda(), 2.0 * (cutoff + 1));
  if (discarded > kTailTolerance * probability) {
    throw NumericalError(fmt::format(
        "cutoff too small: {} leaves up to {:.3g} of the heralded mass", cutoff,
        probability > 0.0 ? discarded / probability : discarded));
  }
}

}  // namespace

double bs_fock_amplitude(double t, int in_b, int in_c, int out_b, int out_c,
                         BeamSplitterSign sign) {
  if (in_b < 0 || in_c < 0 || out_b < 0 || out_c < 0) {
    throw std::invalid_argument("photon numbers must be non-negative");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("transmittance must lie in [0, 1]");
  }
  if (in_b + in_c != out_b + out_c) return 0.0;

  // Coefficient of (b^dag)^out_b (c^dag)^out_c in
  //   (sqrt(t) b^dag - s c^dag)^in_b (s b^dag + sqrt(t) c^dag)^in_c,
  // s = +-sqrt(1 - t), rescaled by sqrt(out_b! out_c! / (in_b! in_c!)).
  // i counts the b^dag factors taken from the first bracket.
  const double sigma = sign == BeamSplitterSign::standard ? 1.0 : -1.0;
  const double r = 1.0 - t;
  const double norm = 0.5 * (std::lgamma(out_b + 1.0) + std::lgamma(out_c + 1.0) -
                             std::lgamma(in_b + 1.0) - std::lgamma(in_c + 1.0));
  double amplitude = 0.0;
  const int i_min = std::max(0, out_b - in_c);
  const int i_max = std::min(in_b, out_b);
  for (int i = i_min; i <= i_max; ++i) {
    const int reflected_b = in_b - i;       // b -> c, carries -sigma s
    const int reflected_c = out_b - i;      // c -> b, carries +sigma s
    const int transmitted = i + in_c - reflected_c;
    if ((reflected_b + reflected_c > 0 && r == 0.0) ||
        (transmitted > 0 && t == 0.0)) {
      continue;
    }
    const double log_mag = log_binomial(in_b, i) +
                           log_binomial(in_c, reflected_c) +
                           0.5 * power_log(transmitted, t) +
                           0.5 * power_log(reflected_b + reflected_c, r) + norm;
    double sgn = (reflected_b % 2 == 0) ? 1.0 : -1.0;
    if (sigma < 0.0 && (reflected_b + reflected_c) % 2 != 0) sgn = -sgn;
    amplitude += sgn * std::exp(log_mag);
  }
  return amplitude;
}

Eigen::MatrixXd bs_sector(double t, int total_photons, BeamSplitterSign sign) {
  const int n = total_photons;
  Eigen::MatrixXd block(n + 1, n + 1);
  for (int out_b = 0; out_b <= n; ++out_b) {
    for (int in_b = 0; in_b <= n; ++in_b) {
      block(out_b, in_b) =
          bs_fock_amplitude(t, in_b, n - in_b, out_b, n - out_b, sign);
    }
  }
  return block;
}

FockState tmsv_fock_state(const SourceParams& src, int cutoff) {
  FockState state{Eigen::MatrixXd::Zero(cutoff + 1, cutoff + 1)};
  const double lam = src.lambda();
  double coeff = std::sqrt(1.0 - lam * lam);
  for (int l = 0; l <= cutoff; ++l) {
    state.amplitudes(l, l) = coeff;
    coeff *= lam;
  }
  return state;
}

int adaptive_cutoff(const SourceParams& src) {
  const double l = src.lambda();
  if (l == 0.0) return kMinCutoff;
  const double mass = std::log(1e-12 * (1.0 - l * l)) / std::log(l * l);
  // The negativity sums |w_l|, whose tail decays only like lambda^l.
  const double amplitude = std::log(1e-12 * (1.0 - l)) / std::log(l);
  return std::max(kMinCutoff,
                  static_cast<int>(std::ceil(std::max(mass, amplitude))));
}

TwoModeCovariance moments(const FockState& state) {
  const auto& psi = state.amplitudes;
  const Eigen::Index dim = psi.rows();
  double n_a = 0.0;
  double n_b = 0.0;
  double ab = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double p = psi(i, j) * psi(i, j);
      n_a += static_cast<double>(i) * p;
      n_b += static_cast<double>(j) * p;
      if (i + 1 < dim && j + 1 < dim) {
        ab += psi(i, j) * psi(i + 1, j + 1) *
              std::sqrt(static_cast<double>((i + 1) * (j + 1)));
      }
    }
  }
  return {1.0 + 2.0 * n_a, 1.0 + 2.0 * n_b, 2.0 * ab};
}

double log_negativity(const FockState& state) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(state.amplitudes);
  return 2.0 * std::log2(svd.singularValues().sum());
}

CatalysisSimulation simulate_catalysis(const CatalysisConfig& cfg,
                                       const SourceParams& src,
                                       std::optional<int> cutoff,
                                       BeamSplitterSign sign) {
  cfg.validate();
  const int dim = cutoff.value_or(adaptive_cutoff(src));
  FockState state = tmsv_fock_state(src, dim);
  const auto op_a = heralding_operator(cfg.t1, cfg.m, cfg.m, dim, sign);
  const auto op_b = heralding_operator(cfg.t2, cfg.n, cfg.n, dim, sign);
  state.amplitudes = op_a * state.amplitudes * op_b.transpose();

  CatalysisSimulation sim;
  sim.cutoff = dim;
  sim.pd = state.norm_sq();
  require_cutoff(src, dim, sim.pd);
  if (!(sim.pd > 0.0)) {
    throw NumericalError("catalysis heralding probability vanished");
  }
  state.amplitudes /= std::sqrt(sim.pd);
  sim.weights.resize(static_cast<std::size_t>(dim) + 1);
  for (int l = 0; l <= dim; ++l) {
    sim.weights[static_cast<std::size_t>(l)] = state.amplitudes(l, l);
  }
  sim.covariance = moments(state);
  sim.e_n = log_negativity(state);
  return sim;
}

SubtractionSimulation simulate_subtraction(const SubtractionConfig& cfg,
                                           const SourceParams& src,
                                           std::optional<int> cutoff,
                                           BeamSplitterSign sign) {
  cfg.validate();
  const int dim = cutoff.value_or(adaptive_cutoff(src));
  FockState state = tmsv_fock_state(src, dim);
  const auto op_b = heralding_operator(cfg.t, 0, 1, dim, sign);
  state.amplitudes = state.amplitudes * op_b.transpose();

  SubtractionSimulation sim;
  sim.cutoff = dim;
  sim.p1 = state.norm_sq();
  require_cutoff(src, dim, sim.p1);
  if (sim.p1 == 0.0) return sim;
  state.amplitudes /= std::sqrt(sim.p1);
  sim.covariance = moments(state);
  sim.e_n = log_negativity(state);
  return sim;
}

}  // namespace qcqkd::oracle
