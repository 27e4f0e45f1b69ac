#pragma once

// Closed-form machinery for the two-parameter gamma-ratio family
//   h(x) = [c Gamma(x+a) / Gamma(x+b)]^{1/x},  x > 0.
// The k-th signed log-derivative (-1)^k (ln h)^(k)(x) factors as
// (k!/x^{k+1}) times a kernel that is monotone in x and has the
// closed boundary value ln c + ln Gamma(a) - ln Gamma(b) at x = 0.
// That structure yields a complete classification: for a > b the family
// is logarithmically completely monotone exactly when c clears the
// threshold Gamma(b)/Gamma(a); for a < b the reciprocal is, when c stays
// below it.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logmono/families.hpp"
#include "logmono/series.hpp"
#include "logmono/specfun.hpp"

namespace logmono {
namespace theorem {

inline constexpr int kMaxDerivativeOrder = 25;

// Relative scale separating genuine sign changes from rounding noise in
// the violation scan.
inline constexpr double kViolationToleranceScale = 1e-10;

// Relative guard band around the classification threshold; margins inside
// the band resolve toward the inclusive (monotone) case.
inline constexpr double kClassifyGuardScale = 1e-12;

namespace detail {

inline void validate_params(double a, double b, double c) {
  logmono::detail::require_positive_finite(a, "gamma-ratio parameter a");
  logmono::detail::require_positive_finite(b, "gamma-ratio parameter b");
  logmono::detail::require_positive_finite(c, "gamma-ratio parameter c");
}

inline void validate_order(int k) {
  if (k < 1 || k > kMaxDerivativeOrder) {
    throw std::invalid_argument("derivative order must lie in [1, " +
                                std::to_string(kMaxDerivativeOrder) +
                                "], got " + std::to_string(k));
  }
}

}  // namespace detail

// Conditioning report for the kernel's alternating sum.
struct KernelDiagnostics {
  double largest_term = 0.0;
  // Set when cancellation ate more than six decimal digits, i.e. the
  // largest term exceeds 1e6 times the result magnitude.
  bool ill_conditioned = false;
};

// Kernel value at x >= 0:
//   ln c + ln Gamma(x+a) - ln Gamma(x+b)
//     + sum_{i=1}^{k} ((-x)^i / i!) [psi^(i-1)(x+a) - psi^(i-1)(x+b)].
// Positivity of this kernel at every x > 0 is equivalent to the k-th
// signed log-derivative of h being nonnegative there.
inline double sign_kernel(double a, double b, double c, int k, double x,
                          KernelDiagnostics* diag = nullptr) {
  detail::validate_params(a, b, c);
  detail::validate_order(k);
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("sign_kernel: x must be finite and nonnegative");
  }

  logmono::detail::NeumaierSum acc;
  double largest = 0.0;
  const auto add_tracked = [&](double term) {
    acc.add(term);
    largest = std::max(largest, std::abs(term));
  };

  add_tracked(std::log(c));
  add_tracked(specfun::ln_gamma(x + a));
  add_tracked(-specfun::ln_gamma(x + b));

  if (x > 0.0) {
    double power = 1.0;  // (-x)^i / i!
    for (int i = 1; i <= k; ++i) {
      power *= -x / static_cast<double>(i);
      const double delta =
          specfun::polygamma(i - 1, x + a) - specfun::polygamma(i - 1, x + b);
      add_tracked(power * delta);
    }
  }

  const double value = acc.value();
  if (diag != nullptr) {
    diag->largest_term = largest;
    diag->ill_conditioned = largest > 1e6 * std::abs(value);
  }
  return value;
}

// d/dx of the kernel collapses to a single product:
//   (x^k / k!) [(-1)^k psi^(k)(x+a) - (-1)^k psi^(k)(x+b)].
// Its sign is the sign of a - b for every x > 0, which is what makes the
// kernel monotone.
inline double sign_kernel_derivative(double a, double b, double c, int k,
                                     double x) {
  detail::validate_params(a, b, c);
  detail::validate_order(k);
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error(
        "sign_kernel_derivative: x must be finite and nonnegative");
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double delta =
      sign * (specfun::polygamma(k, x + a) - specfun::polygamma(k, x + b));
  double power = 1.0;  // x^k / k!
  for (int i = 1; i <= k; ++i) power *= x / static_cast<double>(i);
  return power * delta;
}

// (-1)^k (ln h)^(k)(x) = (k! / x^{k+1}) * kernel(x), for x > 0.
inline double signed_log_derivative(double a, double b, double c, int k,
                                    double x, KernelDiagnostics* diag = nullptr) {
  logmono::detail::require_positive_finite(x, "signed_log_derivative");
  const double kernel = sign_kernel(a, b, c, k, x, diag);
  double factor = 1.0 / x;  // k! / x^{k+1}
  for (int i = 1; i <= k; ++i) factor *= static_cast<double>(i) / x;
  return factor * kernel;
}

enum class MonotoneSide {
  DirectLcm,      // h itself is logarithmically completely monotone
  ReciprocalLcm,  // 1/h is
  Undetermined,   // parameters outside both sufficient regions
};

struct Classification {
  MonotoneSide side;
  double threshold;  // Gamma(b) / Gamma(a)
  double margin;     // c - threshold
};

inline const char* to_string(MonotoneSide side) {
  switch (side) {
    case MonotoneSide::DirectLcm:
      return "lcm";
    case MonotoneSide::ReciprocalLcm:
      return "reciprocal-lcm";
    case MonotoneSide::Undetermined:
      return "undetermined";
  }
  return "undetermined";
}

// Decides which side of the family is completely monotone.  Margins
// within the relative guard band of the threshold count as meeting it,
// so borderline inputs land on the inclusive side instead of flapping on
// the last bit of Gamma(b)/Gamma(a).
inline Classification classify(double a, double b, double c) {
  detail::validate_params(a, b, c);
  const double threshold = specfun::gamma_ratio(b, a);
  const double margin = c - threshold;
  const double guard = kClassifyGuardScale * threshold;

  MonotoneSide side = MonotoneSide::Undetermined;
  if (a > b && margin >= -guard) {
    side = MonotoneSide::DirectLcm;
  } else if (a < b && margin <= guard) {
    side = MonotoneSide::ReciprocalLcm;
  }
  return {side, threshold, margin};
}

struct ViolationPoint {
  double x;
  double value;  // the offending signed log-derivative
};

// Scans (-1)^k (ln h)^(k) on an ascending log grid and reports the first
// point where it drops below the noise tolerance, i.e. where logarithmic
// complete monotonicity demonstrably fails at order k.
inline std::optional<ViolationPoint> find_violation(double a, double b,
                                                    double c, int k,
                                                    double x_max = 100.0) {
  detail::validate_params(a, b, c);
  detail::validate_order(k);
  logmono::detail::require_positive_finite(x_max, "find_violation x_max");

  constexpr int kPoints = 400;
  const double lo = std::min(1e-8, x_max * 1e-6);
  const double log_lo = std::log(lo);
  const double log_hi = std::log(x_max);
  const double tolerance =
      kViolationToleranceScale * (1.0 + std::abs(std::log(c)));

  for (int i = 0; i < kPoints; ++i) {
    const double x =
        (i == kPoints - 1)
            ? x_max
            : std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                    static_cast<double>(kPoints - 1));
    const double value = signed_log_derivative(a, b, c, k, x);
    if (value < -tolerance) {
      return ViolationPoint{x, value};
    }
  }
  return std::nullopt;
}

// One point of the identity (-1)^k (ln h)^(k) = (k!/x^{k+1}) * kernel,
// evaluated through both independent pipelines.
struct IdentityProbe {
  double a, b, c;
  int k;
  double x;
  double h_value;      // h(x) via the family catalog
  double kernel_path;  // closed form above
  double series_path;  // (-1)^k * k-th derivative of the ln-series
};

inline IdentityProbe evaluate_identity(double a, double b, double c, int k,
                                       double x) {
  detail::validate_params(a, b, c);
  detail::validate_order(k);
  logmono::detail::require_positive_finite(x, "evaluate_identity");

  const families::FamilySpec spec = families::FamilySpec::general_ratio(a, b, c);
  const series::PolySeries p = families::ln_series_at(spec, x, k);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return IdentityProbe{a,
                       b,
                       c,
                       k,
                       x,
                       families::evaluate(spec, x),
                       signed_log_derivative(a, b, c, k, x),
                       sign * series::derivative(p, k)};
}

}  // namespace theorem
}  // namespace logmono
