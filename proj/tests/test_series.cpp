#include "qcqkd/series.hpp"

#include <gtest/gtest.h>

#include <random>

using qcqkd::JetD;
using qcqkd::mixed_partial_at_zero;

namespace {

using Orders = JetD::Orders;

void expect_coeffs(const JetD& j, std::initializer_list<double> expected,
                   double tol = 1e-14) {
  ASSERT_EQ(j.size(), expected.size());
  std::size_t i = 0;
  for (const double e : expected) {
    EXPECT_NEAR(j.coeffs()(static_cast<Eigen::Index>(i)), e, tol) << "index " << i;
    ++i;
  }
}

void expect_jets_near(const JetD& a, const JetD& b, double tol) {
  ASSERT_TRUE(a.same_shape(b));
  for (Eigen::Index i = 0; i < a.coeffs().size(); ++i) {
    EXPECT_NEAR(a.coeffs()(i), b.coeffs()(i), tol) << "flat index " << i;
  }
}

// Random polynomial with every coefficient drawn from [-1, 1] and the
// constant term shifted away from zero.
JetD random_jet(const Orders& orders, std::mt19937_64& rng, double constant) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  JetD out = JetD::constant(constant, orders);
  std::vector<int> idx(orders.size(), 0);
  while (true) {
    auto term = JetD::constant(dist(rng), orders);
    for (std::size_t v = 0; v < orders.size(); ++v) {
      if (idx[v] > 0) term = term * qcqkd::pow(JetD::variable(v, orders), idx[v]);
    }
    out += term;
    std::size_t v = orders.size();
    while (v > 0) {
      --v;
      if (++idx[v] <= orders[v]) break;
      idx[v] = 0;
      if (v == 0) return out;
    }
    if (orders.empty()) return out;
  }
}

double laguerre(int n, double x) {
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

TEST(Jet, ConstantLayout) {
  expect_coeffs(JetD::constant(1.0, {2}), {1, 0, 0});
  expect_coeffs(JetD::constant(0.0, {1, 1}), {0, 0, 0, 0});
  const auto c = JetD::constant(-3.5, {1, 1, 1, 1});
  EXPECT_EQ(c.size(), 16u);
  EXPECT_EQ(c.constant_term(), -3.5);
  EXPECT_EQ(c.coeffs().tail(15).abs().maxCoeff(), 0.0);
}

TEST(Jet, VariableLayout) {
  expect_coeffs(JetD::variable(0, {2}), {0, 1, 0});
  EXPECT_EQ(JetD::variable(1, {1, 1}).coefficient({0, 1}), 1.0);
  const auto t1 = JetD::variable(2, {1, 1, 1, 1});
  EXPECT_EQ(t1.coefficient({0, 0, 1, 0}), 1.0);
  EXPECT_EQ(t1.coeffs().abs().sum(), 1.0);
}

TEST(Jet, VariableTruncatedOut) {
  try {
    (void)JetD::variable(1, {2, 0});
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "variable truncated out");
  }
  EXPECT_EQ(JetD::variable_or_zero(1, {2, 0}).coeffs().abs().sum(), 0.0);
}

TEST(Jet, SizeIsProductOfOrders) {
  EXPECT_EQ(JetD::constant(0.0, {2, 3, 1, 0}).size(), 3u * 4u * 2u * 1u);
}

TEST(Jet, MultiplicationTruncates) {
  const auto one = JetD::constant(1.0, {2});
  const auto tau = JetD::variable(0, {2});
  expect_coeffs((one + tau) * (one + tau), {1, 2, 1});
  const auto tau1 = JetD::variable(0, {1});
  expect_coeffs((1.0 + tau1) * (1.0 + tau1), {1, 2});
  const auto g = JetD::variable(1, {1, 2});
  const auto p = (1.0 + g) * (1.0 - g);
  EXPECT_EQ(p.coefficient({0, 0}), 1.0);
  EXPECT_EQ(p.coefficient({0, 1}), 0.0);
  EXPECT_EQ(p.coefficient({0, 2}), -1.0);
}

TEST(Jet, Division) {
  const auto g = JetD::variable(0, {3});
  expect_coeffs(1.0 / (1.0 - g), {1, 1, 1, 1});
  const auto g2 = JetD::variable(0, {2});
  expect_coeffs((1.0 - g2 * g2) / (1.0 - g2), {1, 1, 0});

  const Orders o{1, 1};
  const auto t = JetD::variable(0, o);
  const auto y = JetD::variable(1, o);
  const auto q = 1.0 / (1.0 - 0.5 * t - 0.25 * y);
  EXPECT_NEAR(q.coefficient({0, 0}), 1.0, 1e-15);
  EXPECT_NEAR(q.coefficient({1, 0}), 0.5, 1e-15);
  EXPECT_NEAR(q.coefficient({0, 1}), 0.25, 1e-15);
  EXPECT_NEAR(q.coefficient({1, 1}), 0.25, 1e-15);
  // Multiplying back recovers 1.
  expect_jets_near(q * (1.0 - 0.5 * t - 0.25 * y), JetD::constant(1.0, o), 1e-15);
}

TEST(Jet, DivisionByNonInvertible) {
  const auto g = JetD::variable(0, {2});
  try {
    (void)(JetD::constant(1.0, {2}) / g);
    FAIL() << "expected an exception";
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "non-invertible jet");
  }
}

TEST(Jet, ShapeMismatch) {
  EXPECT_THROW((void)(JetD::constant(1.0, {2}) + JetD::constant(1.0, {3})),
               std::invalid_argument);
  EXPECT_THROW((void)(JetD::constant(1.0, {1, 1}) * JetD::constant(1.0, {1})),
               std::invalid_argument);
}

TEST(Jet, Exp) {
  expect_coeffs(qcqkd::exp(JetD::constant(0.0, {2})), {1, 0, 0});
  expect_coeffs(qcqkd::exp(JetD::variable(0, {2})), {1, 1, 0.5});
  const auto e = qcqkd::exp(JetD::constant(0.7, {1}) + JetD::variable(0, {1}));
  EXPECT_NEAR(e.coefficient({0}), std::exp(0.7), 1e-15);
  EXPECT_NEAR(e.coefficient({1}), std::exp(0.7), 1e-15);
}

TEST(Jet, LaguerreGeneratingFunction) {
  for (const double x : {0.0, 0.5, 2.0}) {
    const Orders o{3};
    const auto g = JetD::variable(0, o);
    const auto f = qcqkd::exp(-x * g / (1.0 - g)) / (1.0 - g);
    for (int n = 0; n <= 3; ++n) {
      double fact = 1.0;
      for (int k = 2; k <= n; ++k) fact *= k;
      const int order[] = {n};
      EXPECT_NEAR(mixed_partial_at_zero(f, std::span<const int>(order)) / fact,
                  laguerre(n, x), 1e-10)
          << "n=" << n << " x=" << x;
    }
  }
  const auto g = JetD::variable(0, {1});
  EXPECT_NEAR((qcqkd::exp(-2.0 * g / (1.0 - g)) / (1.0 - g)).coefficient({1}),
              -1.0, 1e-15);
}

TEST(Jet, MixedPartialRawDerivative) {
  const auto g = JetD::variable(0, {2});
  EXPECT_EQ(mixed_partial_at_zero(1.0 / (1.0 - g), {1}), 1.0);
  EXPECT_EQ(mixed_partial_at_zero(1.0 / (1.0 - g), {2}), 2.0);
  const Orders o{1, 1};
  const auto t = JetD::variable(0, o);
  const auto y = JetD::variable(1, o);
  EXPECT_EQ(mixed_partial_at_zero(1.0 / ((1.0 - t) * (1.0 - y)), {1, 1}), 1.0);
}

TEST(Jet, MixedPartialOrderTooHigh) {
  const auto g = JetD::variable(0, {2});
  EXPECT_THROW((void)mixed_partial_at_zero(g, {3}), std::invalid_argument);
  EXPECT_THROW((void)mixed_partial_at_zero(g, {1, 1}), std::invalid_argument);
}

TEST(Jet, RingLaws) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> order_dist(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Orders o(4);
    for (auto& v : o) v = order_dist(rng);
    const auto a = random_jet(o, rng, 0.3);
    const auto b = random_jet(o, rng, 1.5);
    const auto c = random_jet(o, rng, -0.8);
    expect_jets_near(a * (b + c), a * b + a * c, 1e-12);
    expect_jets_near((a * b) / b, a, 1e-12);
    expect_jets_near(qcqkd::exp(a + b), qcqkd::exp(a) * qcqkd::exp(b), 1e-12);
  }
}

TEST(Jet, TruncationConsistency) {
  auto build = [](const Orders& o) {
    const auto t = JetD::variable_or_zero(0, o);
    const auto g = JetD::variable_or_zero(1, o);
    const auto t1 = JetD::variable_or_zero(2, o);
    const auto g1 = JetD::variable_or_zero(3, o);
    const auto w = 0.7 * (g - 0.2) * (t - 0.1);
    const auto w1 = 0.6 * (g1 - 0.3) * (t1 - 0.05);
    return 1.0 / ((1.0 - t) * (1.0 - g) * (1.0 - w * w1));
  };
  for (const auto& [m, n] : {std::pair{1, 1}, std::pair{0, 2}, std::pair{2, 1}}) {
    const Orders exact{m, n, m, n};
    const Orders larger{m + 2, n + 1, m + 1, n + 3};
    const int idx[] = {m, n, m, n};
    EXPECT_DOUBLE_EQ(build(exact).coefficient(std::span<const int>(idx)),
                     build(larger).coefficient(std::span<const int>(idx)));
  }
}

TEST(Jet, PowMatchesRepeatedProduct) {
  const Orders o{3, 2};
  const auto x = 0.4 + JetD::variable(0, o) - 0.3 * JetD::variable(1, o);
  expect_jets_near(qcqkd::pow(x, 3), x * x * x, 1e-15);
  expect_jets_near(qcqkd::pow(x, 0), JetD::constant(1.0, o), 0.0);
}
