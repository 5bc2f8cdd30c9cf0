#include "qcqkd/subtraction.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qcqkd;

namespace {

// Moments of sum_l e_l |l, l-1> built straight from the Fock amplitudes
// sqrt(1 - lambda^2) lambda^l <l-1, 1| B |l, 0>.
struct SeriesMoments {
  double p1 = 0.0;
  double x = 0.0, y = 0.0, z = 0.0, e_n = 0.0;
};

SeriesMoments series_moments(double lambda, double t, int terms = 4000) {
  std::vector<double> e(terms + 2, 0.0);
  SeriesMoments r;
  for (int l = 1; l <= terms; ++l) {
    const double amp = std::sqrt(1.0 - lambda * lambda) * std::pow(lambda, l) *
                       std::sqrt(l * (1.0 - t)) * std::pow(t, 0.5 * (l - 1));
    e[l] = amp;
    r.p1 += amp * amp;
  }
  double na = 0.0, nb = 0.0, ab = 0.0, abs_sum = 0.0;
  for (int l = 1; l <= terms; ++l) {
    const double w = e[l] / std::sqrt(r.p1);
    const double w_next = e[l + 1] / std::sqrt(r.p1);
    na += l * w * w;
    nb += (l - 1) * w * w;
    ab += w * w_next * std::sqrt(static_cast<double>(l + 1) * l);
    abs_sum += std::abs(w);
  }
  r.x = 1.0 + 2.0 * na;
  r.y = 1.0 + 2.0 * nb;
  r.z = 2.0 * ab;
  r.e_n = 2.0 * std::log2(abs_sum);
  return r;
}

}  // namespace

TEST(Subtraction, CeilingIsOneQuarter) {
  const auto src = SourceParams::from_variance(20.0);
  EXPECT_NEAR(ss_optimal_transmittance(src), 17.0 / 19.0, 1e-12);
  EXPECT_NEAR(ss_success_probability({17.0 / 19.0}, src), 0.25, 1e-12);
  for (double t = 0.05; t < 1.0; t += 0.01) {
    EXPECT_LE(ss_success_probability({t}, src), 0.25 + 1e-15);
  }
}

TEST(Subtraction, LiteralForms) {
  for (const double lambda : {0.3, 0.5, 0.9}) {
    for (const double t : {0.2, 0.6, 0.9}) {
      const auto src = SourceParams::from_lambda(lambda);
      const double a2 = (1.0 - lambda * lambda) * (1.0 - t) / t;
      const double b2 = lambda * lambda * t;
      const double p1 = ss_success_probability({t}, src);
      EXPECT_NEAR(p1, a2 * b2 / ((1.0 - b2) * (1.0 - b2)), 1e-14);
      const auto cov = ss_output_covariance({t}, src);
      EXPECT_NEAR(cov.x, (3.0 + b2) / (1.0 - b2), 1e-12);
      EXPECT_NEAR(cov.y, 2.0 * (1.0 + b2) / (1.0 - b2) - 1.0, 1e-12);
      EXPECT_NEAR(cov.z, 4.0 * std::sqrt(b2) / (1.0 - b2), 1e-12);
      EXPECT_NEAR(cov.det_block(), 3.0, 1e-9);
    }
  }
}

TEST(Subtraction, MatchesFockSeries) {
  for (const double lambda : {0.3, 0.5, 0.95}) {
    for (const double t : {0.5, 0.8, 0.95}) {
      const auto src = SourceParams::from_lambda(lambda);
      const auto ref = series_moments(lambda, t);
      EXPECT_NEAR(ss_success_probability({t}, src), ref.p1, 1e-12);
      const auto cov = ss_output_covariance({t}, src);
      EXPECT_NEAR(cov.x, ref.x, 1e-9);
      EXPECT_NEAR(cov.y, ref.y, 1e-9);
      EXPECT_NEAR(cov.z, ref.z, 1e-9);
      EXPECT_NEAR(ss_log_negativity({t}, src), ref.e_n, 1e-9);
    }
  }
}

TEST(Subtraction, VacuumInputNeverHeralds) {
  EXPECT_EQ(ss_success_probability({0.7}, SourceParams::from_alpha(0.0)), 0.0);
  EXPECT_EQ(ss_log_negativity({0.7}, SourceParams::from_alpha(0.0)), 0.0);
}

TEST(Subtraction, InvalidTransmittance) {
  const auto src = SourceParams::from_variance(20.0);
  EXPECT_THROW((void)ss_success_probability({1.0}, src), std::invalid_argument);
  EXPECT_THROW((void)ss_success_probability({0.0}, src), std::invalid_argument);
  EXPECT_THROW((void)ss_output_covariance({-0.2}, src), std::invalid_argument);
}
