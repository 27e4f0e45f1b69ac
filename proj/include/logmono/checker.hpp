#pragma once

// Grid-based sign tables for two nested monotonicity properties:
//   LCM rows hold (-1)^k (ln f)^(k)(x) for k = 1..K,
//   CM rows hold (-1)^k f^(k)(x) for k = 0..K.
// A table is consistent when every entry clears a small relative noise
// tolerance; the first entry that fails becomes the verdict's violation.
// Everything here is sequential and deterministic: the same request
// produces bitwise-identical tables on every run.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "logmono/families.hpp"
#include "logmono/series.hpp"
#include "logmono/theorem.hpp"

namespace logmono {
namespace checker {

// Relative scale for the per-entry noise tolerance.
inline constexpr double kToleranceScale = 1e-10;

enum class Spacing { Log, Linear };

struct GridSpec {
  double x_min;
  double x_max;
  int points;
  Spacing spacing;

  GridSpec(double lo, double hi, int n, Spacing sp)
      : x_min(lo), x_max(hi), points(n), spacing(sp) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw std::invalid_argument(
          "GridSpec: require x_min < x_max, both finite");
    }
    if (sp == Spacing::Log && !(0.0 < lo)) {
      throw std::invalid_argument(
          "GridSpec: log spacing requires x_min > 0");
    }
    if (n < 2 || n > 100000) {
      throw std::invalid_argument("GridSpec: points must lie in [2, 100000]");
    }
  }

  // Desk-scale default: 200 log-spaced points spanning [0.01, 100].
  static GridSpec desk_default() { return GridSpec(0.01, 100.0, 200, Spacing::Log); }

  std::vector<double> make_points() const {
    std::vector<double> xs(static_cast<std::size_t>(points));
    const double n1 = static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
      if (i == 0) {
        xs[0] = x_min;
      } else if (i == points - 1) {
        xs[static_cast<std::size_t>(i)] = x_max;
      } else if (spacing == Spacing::Log) {
        xs[static_cast<std::size_t>(i)] =
            std::exp(std::log(x_min) +
                     (std::log(x_max) - std::log(x_min)) *
                         static_cast<double>(i) / n1);
      } else {
        xs[static_cast<std::size_t>(i)] =
            x_min + (x_max - x_min) * static_cast<double>(i) / n1;
      }
    }
    return xs;
  }
};

enum class CheckMode { Lcm, Cm };

inline const char* to_string(CheckMode mode) {
  return mode == CheckMode::Lcm ? "lcm" : "cm";
}

inline const char* to_string(Spacing sp) {
  return sp == Spacing::Log ? "log" : "linear";
}

struct ViolationInfo {
  int k;
  double x;
  double value;
  // True when no independent closed form was available to re-confirm the
  // sign, so the report rests on the series pipeline alone.
  bool series_only;
};

struct Verdict {
  int max_order;
  double tolerance_scale;
  std::optional<ViolationInfo> violation;

  bool consistent() const { return !violation.has_value(); }
};

struct SignTable {
  CheckMode mode;
  GridSpec grid;
  int max_order;
  int k_min;  // 1 in LCM mode, 0 in CM mode
  std::vector<double> xs;
  // rows[r][i] holds the entry for derivative order k_min + r at xs[i].
  std::vector<std::vector<double>> rows;
  Verdict verdict;
};

namespace detail {

// Noise tolerance for entry i of a row: relative to the largest
// neighbouring magnitude, floored at the absolute scale 1.
inline double entry_tolerance(const std::vector<double>& row, std::size_t i) {
  double scale = 1.0;
  const std::size_t lo = (i == 0) ? 0 : i - 1;
  const std::size_t hi = std::min(i + 1, row.size() - 1);
  for (std::size_t j = lo; j <= hi; ++j) {
    scale = std::max(scale, std::abs(row[j]));
  }
  return kToleranceScale * scale;
}

// Confirmation hook: returns true when the candidate violation survives
// an independent second evaluation path (or when none exists).
using ConfirmFn = std::function<bool(int k, double x, double tolerance)>;

inline Verdict scan_rows(const SignTable& table, const ConfirmFn& confirm,
                         bool series_only) {
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const int k = table.k_min + static_cast<int>(r);
    const std::vector<double>& row = table.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      const double tol = entry_tolerance(row, i);
      if (row[i] < -tol) {
        if (confirm && !confirm(k, table.xs[i], tol)) {
          continue;  // the independent path calls it noise
        }
        return Verdict{table.max_order, kToleranceScale,
                       ViolationInfo{k, table.xs[i], row[i], series_only}};
      }
    }
  }
  return Verdict{table.max_order, kToleranceScale, std::nullopt};
}

inline void require_order(int k_lo, int max_order) {
  if (max_order < k_lo || max_order > series::kMaxSeriesOrder) {
    throw std::invalid_argument(
        "sign table: max order must lie in [" + std::to_string(k_lo) + ", " +
        std::to_string(series::kMaxSeriesOrder) + "]");
  }
}

inline void require_grid_in_domain(const families::FamilySpec& spec,
                                   const GridSpec& grid) {
  const families::Interval dom = spec.domain();
  if (!dom.contains(grid.x_min) || !dom.contains(grid.x_max)) {
    throw std::domain_error(std::string("sign table: grid [") +
                            logmono::detail::format_real(grid.x_min) + ", " +
                            logmono::detail::format_real(grid.x_max) +
                            "] leaves the domain of " + spec.name());
  }
}

}  // namespace detail

// LCM table for a catalog family.  For the two-parameter gamma-ratio
// members a candidate violation is re-confirmed through the theorem
// module's closed form before being reported.
inline SignTable lcm_sign_table(const families::FamilySpec& spec,
                                const GridSpec& grid, int max_order) {
  detail::require_order(1, max_order);
  detail::require_grid_in_domain(spec, grid);

  SignTable table{CheckMode::Lcm, grid, max_order, 1, grid.make_points(), {}, {}};
  table.rows.assign(static_cast<std::size_t>(max_order),
                    std::vector<double>(table.xs.size(), 0.0));
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    const series::PolySeries p =
        families::ln_series_at(spec, table.xs[i], max_order);
    for (int k = 1; k <= max_order; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      table.rows[static_cast<std::size_t>(k - 1)][i] =
          sign * series::derivative(p, k);
    }
  }

  detail::ConfirmFn confirm;
  bool series_only = true;
  const auto* ratio =
      std::get_if<families::GeneralRatioFamily>(&spec.storage());
  const bool coding_gain =
      std::holds_alternative<families::CodingGainFamily>(spec.storage());
  if (ratio != nullptr || coding_gain) {
    const double a = ratio ? ratio->a : 1.0;
    const double b = ratio ? ratio->b : 0.5;
    const double c = ratio ? ratio->c : logmono::detail::kTwoSqrtPi;
    series_only = false;
    confirm = [a, b, c](int k, double x, double tolerance) {
      return theorem::signed_log_derivative(a, b, c, k, x) < -0.5 * tolerance;
    };
  }
  table.verdict = detail::scan_rows(table, confirm, series_only);
  return table;
}

// CM table for a catalog family; entries come from the exp-lift of the
// ln-series, so row k = 0 is the function value itself.
inline SignTable cm_sign_table(const families::FamilySpec& spec,
                               const GridSpec& grid, int max_order) {
  detail::require_order(0, max_order);
  detail::require_grid_in_domain(spec, grid);

  SignTable table{CheckMode::Cm, grid, max_order, 0, grid.make_points(), {}, {}};
  table.rows.assign(static_cast<std::size_t>(max_order) + 1,
                    std::vector<double>(table.xs.size(), 0.0));
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    const series::PolySeries f = series::exp_series(
        families::ln_series_at(spec, table.xs[i], max_order));
    for (int k = 0; k <= max_order; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      table.rows[static_cast<std::size_t>(k)][i] =
          sign * series::derivative(f, k);
    }
  }
  table.verdict = detail::scan_rows(table, nullptr, true);
  return table;
}

// LCM table for a measure representation, via the log of the transform.
inline SignTable lcm_sign_table(const families::MeasureRep& measure,
                                const GridSpec& grid, int max_order) {
  detail::require_order(1, max_order);
  SignTable table{CheckMode::Lcm, grid, max_order, 1, grid.make_points(), {}, {}};
  table.rows.assign(static_cast<std::size_t>(max_order),
                    std::vector<double>(table.xs.size(), 0.0));
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    const series::PolySeries p =
        families::stieltjes_ln_series_at(measure, table.xs[i], max_order);
    for (int k = 1; k <= max_order; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      table.rows[static_cast<std::size_t>(k - 1)][i] =
          sign * series::derivative(p, k);
    }
  }
  table.verdict = detail::scan_rows(table, nullptr, true);
  return table;
}

// CM table for a measure representation, from the exact closed-form
// derivatives rather than any series pipeline.
inline SignTable cm_sign_table(const families::MeasureRep& measure,
                               const GridSpec& grid, int max_order) {
  detail::require_order(0, max_order);
  SignTable table{CheckMode::Cm, grid, max_order, 0, grid.make_points(), {}, {}};
  table.rows.assign(static_cast<std::size_t>(max_order) + 1,
                    std::vector<double>(table.xs.size(), 0.0));
  for (std::size_t i = 0; i < table.xs.size(); ++i) {
    for (int k = 0; k <= max_order; ++k) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      table.rows[static_cast<std::size_t>(k)][i] =
          sign * families::stieltjes_kth_derivative(measure, k, table.xs[i]);
    }
  }
  table.verdict = detail::scan_rows(table, nullptr, false);
  return table;
}

// Sample-level display of the containment chain: a Stieltjes transform
// should pass the LCM check, and every LCM function passes the CM check.
struct InclusionReport {
  SignTable lcm_table;
  SignTable cm_table;
  bool inclusion_holds;
};

inline InclusionReport inclusion_demo(const families::MeasureRep& measure,
                                      const GridSpec& grid, int max_order) {
  InclusionReport report{lcm_sign_table(measure, grid, max_order),
                         cm_sign_table(measure, grid, max_order), false};
  report.inclusion_holds = report.lcm_table.verdict.consistent() &&
                           report.cm_table.verdict.consistent();
  return report;
}

struct FdCrossCheck {
  double series_value;
  double fd_value;
  double rel_err;
};

namespace detail {

// Order-h^2 central difference for the k-th derivative, k <= 4.
template <class F>
double central_difference(const F& g, double x, int k, double h) {
  switch (k) {
    case 1:
      return (g(x + h) - g(x - h)) / (2.0 * h);
    case 2:
      return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h);
    case 3:
      return (g(x + 2.0 * h) - 2.0 * g(x + h) + 2.0 * g(x - h) -
              g(x - 2.0 * h)) /
             (2.0 * h * h * h);
    case 4:
      return (g(x + 2.0 * h) - 4.0 * g(x + h) + 6.0 * g(x) - 4.0 * g(x - h) +
              g(x - 2.0 * h)) /
             (h * h * h * h);
    default:
      throw std::invalid_argument(
          "central_difference: only orders 1..4 are supported");
  }
}

// Richardson extrapolation over halved steps; returns the diagonal entry
// with the smallest successive-difference error estimate.
template <class F>
double richardson(const F& g, double x, int k, double h0) {
  constexpr int kLevels = 6;
  double table[kLevels][kLevels];
  double best = 0.0;
  double best_err = std::numeric_limits<double>::infinity();

  for (int j = 0; j < kLevels; ++j) {
    table[j][0] = central_difference(g, x, k, h0 / std::pow(2.0, j));
    for (int m = 1; m <= j; ++m) {
      const double weight = std::pow(4.0, m);
      table[j][m] =
          (weight * table[j][m - 1] - table[j - 1][m - 1]) / (weight - 1.0);
    }
    if (j > 0) {
      const double err = std::abs(table[j][j] - table[j - 1][j - 1]);
      if (err < best_err) {
        best_err = err;
        best = table[j][j];
      }
    }
  }
  return best;
}

}  // namespace detail

// Independent check of the series pipeline: the k-th derivative of ln f
// at x from Richardson-extrapolated central differences of the scalar
// evaluator, against the same derivative read off the ln-series.
inline FdCrossCheck finite_difference_crosscheck(
    const families::FamilySpec& spec, double x, int k) {
  if (k < 1 || k > 4) {
    throw std::invalid_argument(
        "finite_difference_crosscheck: order must lie in [1, 4]");
  }
  const families::Interval dom = spec.domain();
  if (!dom.contains(x)) {
    throw std::domain_error(
        "finite_difference_crosscheck: x is outside the family domain");
  }

  double clearance = std::min(x - dom.lo, dom.hi - x);
  for (double r : spec.removable_points()) {
    clearance = std::min(clearance, std::abs(x - r));
  }
  double h0 = std::min(0.05 * std::max(1.0, std::abs(x)), clearance / 10.0);
  if (!(h0 >= 1e-7 * std::max(1.0, std::abs(x)))) {
    throw std::domain_error(
        "finite_difference_crosscheck: step underflow near a domain boundary "
        "or removable point");
  }

  const auto g = [&spec](double y) {
    return std::log(families::evaluate(spec, y));
  };
  const double fd = detail::richardson(g, x, k, h0);
  const double sv = series::derivative(families::ln_series_at(spec, x, k), k);

  const double denom = std::max(std::abs(sv), std::abs(fd));
  const double rel = (denom == 0.0) ? 0.0 : std::abs(sv - fd) / denom;
  return FdCrossCheck{sv, fd, rel};
}

struct SweepRow {
  double value;                     // the swept parameter value
  std::optional<Verdict> verdict;   // empty when this row errored
  std::string error;                // diagnostic for an errored row
};

// Runs the LCM table for each parameter value in order.  Rows that fail
// family validation or evaluation record the error and move on, so one
// bad value cannot take down a scan.
inline std::vector<SweepRow> sweep(const families::FamilySpec& base,
                                   std::string_view parameter,
                                   const std::vector<double>& values,
                                   const GridSpec& grid, int max_order) {
  if (values.size() > 10000) {
    throw std::invalid_argument("sweep: at most 10000 parameter values");
  }
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SweepRow row{v, std::nullopt, {}};
    try {
      const families::FamilySpec spec = base.with_parameter(parameter, v);
      row.verdict = lcm_sign_table(spec, grid, max_order).verdict;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace checker
}  // namespace logmono
