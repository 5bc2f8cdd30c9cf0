#pragma once

// Multivariate truncated power series ("jets") over a small number of
// variables, stored densely in row-major multi-index order.
//
// A jet with orders (o_1, ..., o_k) holds the Taylor coefficients
// c[i_1..i_k] of x_1^{i_1} ... x_k^{i_k} for every i_v <= o_v. Products
// discard any term whose exponent exceeds the order of *any* variable, which
// keeps the coefficient of a given multi-index exact as long as every
// variable is truncated at or above the requested degree.
//
// Derivative convention: mixed_partial_at_zero returns the raw derivative
// d^{i_1}/dx_1^{i_1} ... at the origin, i.e. the Taylor coefficient
// multiplied by i_1! ... i_k!. Callers that want a Taylor coefficient use
// Jet::coefficient directly.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcqkd {

inline constexpr std::size_t kMaxJetVars = 4;

template <typename Scalar = double>
class Jet {
 public:
  using Coefficients = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  using Orders = std::vector<int>;

  Jet() = default;

  /// Constant jet c with the given per-variable truncation orders.
  static Jet constant(Scalar c, Orders orders) {
    Jet jet(std::move(orders));
    jet.coeffs_(0) = c;
    return jet;
  }

  /// The coordinate function x_index. Requires orders[index] >= 1.
  static Jet variable(std::size_t index, Orders orders) {
    if (index >= orders.size()) {
      throw std::invalid_argument("jet variable index out of range");
    }
    if (orders[index] < 1) {
      throw std::invalid_argument("variable truncated out");
    }
    Jet jet(std::move(orders));
    jet.coeffs_(static_cast<Eigen::Index>(jet.strides_[index])) = Scalar(1);
    return jet;
  }

  /// x_index when the variable is kept, the zero jet when its order is 0.
  /// A variable truncated at order 0 only ever contributes through its value
  /// at the origin, which is zero.
  static Jet variable_or_zero(std::size_t index, Orders orders) {
    if (index < orders.size() && orders[index] == 0) {
      return constant(Scalar(0), std::move(orders));
    }
    return variable(index, std::move(orders));
  }

  std::size_t num_vars() const { return orders_.size(); }
  const Orders& orders() const { return orders_; }
  std::size_t size() const { return static_cast<std::size_t>(coeffs_.size()); }
  const Coefficients& coeffs() const { return coeffs_; }

  Scalar constant_term() const { return coeffs_(0); }

  /// Taylor coefficient of the monomial with exponents `index`.
  Scalar coefficient(std::span<const int> index) const {
    return coeffs_(static_cast<Eigen::Index>(flat_index(index)));
  }
  Scalar coefficient(std::initializer_list<int> index) const {
    return coefficient(std::span<const int>(index.begin(), index.size()));
  }

  bool same_shape(const Jet& other) const { return orders_ == other.orders_; }

  Jet& operator+=(const Jet& rhs) {
    require_same_shape(rhs);
    coeffs_ += rhs.coeffs_;
    return *this;
  }
  Jet& operator-=(const Jet& rhs) {
    require_same_shape(rhs);
    coeffs_ -= rhs.coeffs_;
    return *this;
  }
  Jet& operator*=(const Jet& rhs) { return *this = *this * rhs; }
  Jet& operator/=(const Jet& rhs) { return *this = *this / rhs; }

  Jet& operator+=(Scalar c) {
    coeffs_(0) += c;
    return *this;
  }
  Jet& operator-=(Scalar c) {
    coeffs_(0) -= c;
    return *this;
  }
  Jet& operator*=(Scalar c) {
    coeffs_ *= c;
    return *this;
  }
  Jet& operator/=(Scalar c) {
    coeffs_ /= c;
    return *this;
  }

  Jet operator-() const {
    Jet out = *this;
    out.coeffs_ = -out.coeffs_;
    return out;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, Scalar c) { return a += c; }
  friend Jet operator+(Scalar c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, Scalar c) { return a -= c; }
  friend Jet operator-(Scalar c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, Scalar c) { return a *= c; }
  friend Jet operator*(Scalar c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, Scalar c) { return a /= c; }
  friend Jet operator/(Scalar c, const Jet& a) {
    return Jet::constant(c, a.orders_) / a;
  }

  /// Truncated product.
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.require_same_shape(b);
    Jet out(a.orders_);
    const auto n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Scalar ai = a.coeffs_(static_cast<Eigen::Index>(i));
      if (ai == Scalar(0)) continue;
      for (std::size_t j = 0; j + i < n; ++j) {
        const Scalar bj = b.coeffs_(static_cast<Eigen::Index>(j));
        if (bj == Scalar(0) || !a.sum_in_range(i, j)) continue;
        out.coeffs_(static_cast<Eigen::Index>(i + j)) += ai * bj;
      }
    }
    return out;
  }

  /// Truncated quotient, solved coefficient by coefficient. Row-major order
  /// visits every multi-index after all of its proper sub-indices, so each
  /// c_k only depends on already-computed entries.
  friend Jet operator/(const Jet& a, const Jet& b) {
    a.require_same_shape(b);
    const Scalar b0 = b.coeffs_(0);
    if (b0 == Scalar(0)) {
      throw std::domain_error("non-invertible jet");
    }
    Jet out(a.orders_);
    const auto n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
      Scalar acc = a.coeffs_(static_cast<Eigen::Index>(k));
      for (std::size_t j = 1; j <= k; ++j) {
        const Scalar bj = b.coeffs_(static_cast<Eigen::Index>(j));
        if (bj == Scalar(0) || !a.is_sub_index(j, k)) continue;
        acc -= bj * out.coeffs_(static_cast<Eigen::Index>(k - j));
      }
      out.coeffs_(static_cast<Eigen::Index>(k)) = acc / b0;
    }
    return out;
  }

  /// Sum of the truncation orders: the largest total degree stored.
  int total_degree() const {
    return std::accumulate(orders_.begin(), orders_.end(), 0);
  }

 private:
  explicit Jet(Orders orders) : orders_(std::move(orders)) {
    if (orders_.empty() || orders_.size() > kMaxJetVars) {
      throw std::invalid_argument("jet must have between 1 and " +
                                  std::to_string(kMaxJetVars) + " variables");
    }
    if (std::any_of(orders_.begin(), orders_.end(),
                    [](int o) { return o < 0; })) {
      throw std::invalid_argument("jet truncation orders must be non-negative");
    }
    strides_.assign(orders_.size(), 1);
    for (std::size_t v = orders_.size() - 1; v > 0; --v) {
      strides_[v - 1] = strides_[v] * static_cast<std::size_t>(orders_[v] + 1);
    }
    const std::size_t n = strides_[0] * static_cast<std::size_t>(orders_[0] + 1);
    coeffs_ = Coefficients::Zero(static_cast<Eigen::Index>(n));
  }

  void require_same_shape(const Jet& other) const {
    if (!same_shape(other)) {
      throw std::invalid_argument("jet shape mismatch");
    }
  }

  std::size_t flat_index(std::span<const int> index) const {
    if (index.size() != orders_.size()) {
      throw std::invalid_argument("multi-index has wrong number of variables");
    }
    std::size_t flat = 0;
    for (std::size_t v = 0; v < index.size(); ++v) {
      if (index[v] < 0 || index[v] > orders_[v]) {
        throw std::out_of_range("multi-index exceeds truncation order");
      }
      flat += strides_[v] * static_cast<std::size_t>(index[v]);
    }
    return flat;
  }

  int digit(std::size_t flat, std::size_t v) const {
    return static_cast<int>((flat / strides_[v]) %
                            static_cast<std::size_t>(orders_[v] + 1));
  }

  // i + j stays inside the truncation box in every variable.
  bool sum_in_range(std::size_t i, std::size_t j) const {
    for (std::size_t v = 0; v < orders_.size(); ++v) {
      if (digit(i, v) + digit(j, v) > orders_[v]) return false;
    }
    return true;
  }

  // j <= k componentwise.
  bool is_sub_index(std::size_t j, std::size_t k) const {
    for (std::size_t v = 0; v < orders_.size(); ++v) {
      if (digit(j, v) > digit(k, v)) return false;
    }
    return true;
  }

  Orders orders_;
  std::vector<std::size_t> strides_;
  Coefficients coeffs_;
};

using JetD = Jet<double>;

/// a^power by repeated squaring in the truncated ring.
template <typename Scalar>
Jet<Scalar> pow(Jet<Scalar> base, unsigned power) {
  auto result = Jet<Scalar>::constant(Scalar(1), base.orders());
  while (power > 0) {
    if (power & 1u) result = result * base;
    power >>= 1u;
    if (power > 0) base = base * base;
  }
  return result;
}

/// exp(a) = exp(a_0) * sum_k (a - a_0)^k / k!. The shifted series is
/// nilpotent of index total_degree() + 1, so the sum is exact.
template <typename Scalar>
Jet<Scalar> exp(const Jet<Scalar>& a) {
  using std::exp;
  const Scalar a0 = a.constant_term();
  const auto shifted = a - a0;
  auto term = Jet<Scalar>::constant(Scalar(1), a.orders());
  auto sum = term;
  const int degree = a.total_degree();
  for (int k = 1; k <= degree; ++k) {
    term = term * shifted / Scalar(k);
    sum += term;
  }
  return sum * exp(a0);
}

/// Raw mixed partial derivative at the origin:
///   d^{k_1}/dx_1^{k_1} ... d^{k_n}/dx_n^{k_n} f |_0
/// = coefficient(k) * k_1! * ... * k_n!.
template <typename Scalar>
Scalar mixed_partial_at_zero(const Jet<Scalar>& f, std::span<const int> orders) {
  if (orders.size() != f.num_vars()) {
    throw std::invalid_argument("derivative orders do not match jet variables");
  }
  for (std::size_t v = 0; v < orders.size(); ++v) {
    if (orders[v] < 0) {
      throw std::invalid_argument("negative derivative order");
    }
    if (orders[v] > f.orders()[v]) {
      throw std::invalid_argument("derivative order exceeds truncation order");
    }
  }
  Scalar value = f.coefficient(orders);
  for (const int k : orders) {
    for (int i = 2; i <= k; ++i) value *= Scalar(i);
  }
  return value;
}

template <typename Scalar>
Scalar mixed_partial_at_zero(const Jet<Scalar>& f,
                             std::initializer_list<int> orders) {
  return mixed_partial_at_zero(
      f, std::span<const int>(orders.begin(), orders.size()));
}

}  // namespace qcqkd
