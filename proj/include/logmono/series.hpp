#pragma once

// Truncated power series with coefficients c[j] = f^(j)(x0) / j!, the
// arithmetic backbone for high-order derivatives of log-transformed
// gamma expressions.  Orders are capped at 25; beyond that binary64
// coefficient noise outgrows the values being computed.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "logmono/specfun.hpp"

namespace logmono {
namespace series {

inline constexpr int kMaxSeriesOrder = 25;

// Any intermediate coefficient beyond this magnitude aborts the
// computation instead of silently degrading to garbage.
inline constexpr double kCoeffMagnitudeGuard = 1e150;

class PolySeries {
 public:
  // coeffs[j] = f^(j)(x0) / j!; the vector length fixes order + 1.
  PolySeries(double x0, std::vector<double> coeffs)
      : x0_(x0), coeffs_(std::move(coeffs)) {
    if (!std::isfinite(x0_)) {
      throw std::invalid_argument("PolySeries: expansion point must be finite");
    }
    if (coeffs_.empty()) {
      throw std::invalid_argument("PolySeries: coefficient list is empty");
    }
    if (static_cast<int>(coeffs_.size()) - 1 > kMaxSeriesOrder) {
      throw std::invalid_argument(
          "PolySeries: order cap exceeded (max " +
          std::to_string(kMaxSeriesOrder) + ")");
    }
    check_magnitude();
  }

  static PolySeries constant(double x0, double value, int order) {
    std::vector<double> c(static_cast<std::size_t>(checked_order(order)) + 1,
                          0.0);
    c[0] = value;
    return PolySeries(x0, std::move(c));
  }

  // Series of the identity map x -> x.
  static PolySeries variable(double x0, int order) {
    std::vector<double> c(static_cast<std::size_t>(checked_order(order)) + 1,
                          0.0);
    c[0] = x0;
    if (order >= 1) c[1] = 1.0;
    return PolySeries(x0, std::move(c));
  }

  // Builds a series from raw derivative values f(x0), f'(x0), ..., f^(K)(x0).
  static PolySeries from_derivatives(double x0,
                                     const std::vector<double>& derivs) {
    std::vector<double> c(derivs.size());
    double fact = 1.0;
    for (std::size_t j = 0; j < derivs.size(); ++j) {
      if (j > 1) fact *= static_cast<double>(j);
      c[j] = derivs[j] / fact;
    }
    return PolySeries(x0, std::move(c));
  }

  double x0() const { return x0_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int j) const {
    return coeffs_.at(static_cast<std::size_t>(j));
  }

 private:
  static int checked_order(int order) {
    if (order < 0 || order > kMaxSeriesOrder) {
      throw std::invalid_argument("PolySeries: order must lie in [0, " +
                                  std::to_string(kMaxSeriesOrder) + "]");
    }
    return order;
  }

  void check_magnitude() const {
    for (double c : coeffs_) {
      if (!(std::abs(c) <= kCoeffMagnitudeGuard)) {
        throw std::overflow_error(
            "PolySeries: coefficient magnitude exceeded the stability guard");
      }
    }
  }

  double x0_;
  std::vector<double> coeffs_;
};

namespace detail {

inline void require_aligned(const PolySeries& a, const PolySeries& b,
                            const char* op) {
  if (a.x0() != b.x0()) {
    throw std::invalid_argument(std::string(op) +
                                ": series expanded at different points");
  }
  if (a.order() != b.order()) {
    throw std::invalid_argument(std::string(op) +
                                ": series truncated at different orders");
  }
}

}  // namespace detail

inline PolySeries add(const PolySeries& a, const PolySeries& b) {
  detail::require_aligned(a, b, "add");
  std::vector<double> c(a.coeffs());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] += b.coeffs()[j];
  return PolySeries(a.x0(), std::move(c));
}

inline PolySeries sub(const PolySeries& a, const PolySeries& b) {
  detail::require_aligned(a, b, "sub");
  std::vector<double> c(a.coeffs());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] -= b.coeffs()[j];
  return PolySeries(a.x0(), std::move(c));
}

inline PolySeries scale(const PolySeries& a, double factor) {
  std::vector<double> c(a.coeffs());
  for (double& v : c) v *= factor;
  return PolySeries(a.x0(), std::move(c));
}

// Cauchy product truncated at the common order.
inline PolySeries mul(const PolySeries& a, const PolySeries& b) {
  detail::require_aligned(a, b, "mul");
  const std::size_t n = a.coeffs().size();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    logmono::detail::NeumaierSum acc;
    for (std::size_t i = 0; i <= k; ++i) {
      acc.add(a.coeffs()[i] * b.coeffs()[k - i]);
    }
    c[k] = acc.value();
  }
  return PolySeries(a.x0(), std::move(c));
}

// Coefficientwise long division; requires a nonzero leading denominator
// coefficient (the function value at x0).
inline PolySeries div(const PolySeries& num, const PolySeries& den) {
  detail::require_aligned(num, den, "div");
  const double q0 = den.coeffs()[0];
  if (q0 == 0.0 || !std::isfinite(q0)) {
    throw std::domain_error(
        "div: denominator series vanishes at the expansion point");
  }
  const std::size_t n = num.coeffs().size();
  std::vector<double> r(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    logmono::detail::NeumaierSum acc;
    acc.add(num.coeffs()[k]);
    for (std::size_t i = 0; i < k; ++i) {
      acc.add(-r[i] * den.coeffs()[k - i]);
    }
    r[k] = acc.value() / q0;
  }
  return PolySeries(num.x0(), std::move(r));
}

// exp of a series: e[0] = exp(p[0]), k e[k] = sum_{i=1}^{k} i p[i] e[k-i].
inline PolySeries exp_series(const PolySeries& p) {
  const std::size_t n = p.coeffs().size();
  std::vector<double> e(n, 0.0);
  e[0] = std::exp(p.coeffs()[0]);
  if (!std::isfinite(e[0])) {
    throw std::overflow_error("exp_series: value overflows at the expansion point");
  }
  for (std::size_t k = 1; k < n; ++k) {
    logmono::detail::NeumaierSum acc;
    for (std::size_t i = 1; i <= k; ++i) {
      acc.add(static_cast<double>(i) * p.coeffs()[i] * e[k - i]);
    }
    e[k] = acc.value() / static_cast<double>(k);
  }
  return PolySeries(p.x0(), std::move(e));
}

// ln of a series with positive value at the expansion point:
// l[k] = (p[k] - (1/k) sum_{i=1}^{k-1} i l[i] p[k-i]) / p[0].
inline PolySeries ln_series(const PolySeries& p) {
  const double p0 = p.coeffs()[0];
  if (!(p0 > 0.0) || !std::isfinite(p0)) {
    throw std::domain_error(
        "ln_series: series value at the expansion point must be positive");
  }
  const std::size_t n = p.coeffs().size();
  std::vector<double> l(n, 0.0);
  l[0] = std::log(p0);
  for (std::size_t k = 1; k < n; ++k) {
    logmono::detail::NeumaierSum acc;
    acc.add(p.coeffs()[k]);
    for (std::size_t i = 1; i < k; ++i) {
      acc.add(-(static_cast<double>(i) / static_cast<double>(k)) * l[i] *
              p.coeffs()[k - i]);
    }
    l[k] = acc.value() / p0;
  }
  return PolySeries(p.x0(), std::move(l));
}

// Series at x0 of x -> ln Gamma(x + shift), built from polygamma values:
// coefficient j >= 1 is psi^(j-1)(x0 + shift) / j!.
inline PolySeries from_lngamma(double x0, double shift, int order) {
  if (order < 0 || order > kMaxSeriesOrder) {
    throw std::invalid_argument("from_lngamma: order must lie in [0, " +
                                std::to_string(kMaxSeriesOrder) + "]");
  }
  const double z = x0 + shift;
  logmono::detail::require_positive_finite(z, "from_lngamma");
  std::vector<double> derivs(static_cast<std::size_t>(order) + 1);
  derivs[0] = specfun::ln_gamma(z);
  for (int j = 1; j <= order; ++j) {
    derivs[static_cast<std::size_t>(j)] = specfun::polygamma(j - 1, z);
  }
  return PolySeries::from_derivatives(x0, derivs);
}

// Reinterprets p (a series of f at p.x0()) as the series at new_x0 of
// g(x) = f(p.x0() + lambda * (x - new_x0)): coefficients pick up lambda^j.
inline PolySeries compose_linear(const PolySeries& p, double lambda,
                                 double new_x0) {
  std::vector<double> c(p.coeffs());
  double power = 1.0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    power *= lambda;
    c[j] *= power;
  }
  return PolySeries(new_x0, std::move(c));
}

// Exact derivative extraction: f^(k)(x0) = k! * c[k].
inline double derivative(const PolySeries& p, int k) {
  if (k < 0 || k > p.order()) {
    throw std::invalid_argument(
        "derivative: requested order exceeds the series truncation");
  }
  return logmono::detail::factorial(k) * p.coeff(k);
}

}  // namespace series
}  // namespace logmono
