#pragma once

// Catalog of positive function families built from gamma-function ratios
// raised to reciprocal-argument powers, together with a rational
// representation of Stieltjes-transform measures.  Each family knows its
// natural open domain, its removable singularities, a canonical text form
// for CLI and file use, and how to produce the truncated power series of
// its logarithm at an interior point.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "logmono/series.hpp"
#include "logmono/specfun.hpp"

namespace logmono {

namespace detail {

inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kTwoSqrtPi = 3.5449077018110320546;

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

// Accepts a decimal literal or one of the named constants used in
// canonical family text.
inline double parse_real_token(std::string_view token, const std::string& what) {
  if (token == "sqrtpi") return kSqrtPi;
  if (token == "2sqrtpi") return kTwoSqrtPi;
  const std::string text(token);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == nullptr || *end != '\0' || text.empty()) {
    throw std::invalid_argument(what + ": cannot parse real value '" + text +
                                "'");
  }
  return v;
}

}  // namespace detail

namespace families {

using series::PolySeries;

// Open interval; endpoints are never part of a family's domain.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return lo < x && x < hi; }
  bool empty() const { return !(lo < hi); }
};

namespace detail {

// Preimage {x : s * x in I} for the open interval I.
inline Interval scale_preimage(const Interval& i, double s) {
  if (s > 0.0) return {i.lo / s, i.hi / s};
  if (s < 0.0) return {i.hi / s, i.lo / s};
  if (i.contains(0.0)) return {};  // whole line
  return {0.0, 0.0};               // empty
}

inline Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace detail

// Positive samples of an auxiliary base function on an ascending grid,
// interpolated linearly in log space.
struct TabulatedBase {
  std::string path;
  std::vector<double> xs;
  std::vector<double> ln_f;

  double ln_value(double x) const {
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin() || it == xs.end()) {
      throw std::domain_error("tabulated base: query outside the table range");
    }
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
    return ln_f[lo] + t * (ln_f[hi] - ln_f[lo]);
  }

  Interval domain() const { return {xs.front(), xs.back()}; }
};

struct CodingGainFamily {};
struct GeneralRatioFamily {
  double a, b, c;
};
struct ShiftedRootRatioFamily {
  double alpha;
};
struct QiBergFamily {};
struct GstRatioFamily {
  double s, t;
};
struct GeneralPowerRatioFamily {
  double a, b;
  std::shared_ptr<const TabulatedBase> table;  // null means gamma-shift base
};
struct HBetaFamily {
  double s, t, beta;
};
struct PAlphaFamily {
  double alpha;
};
struct HAlphaYFamily {
  double alpha, y;
};
struct PsiRatioFamily {
  double s, t;
};

enum class FamilyKind {
  CodingGain,
  GeneralRatio,
  ShiftedRootRatio,
  QiBerg,
  GstRatio,
  GeneralPowerRatio,
  HBeta,
  PAlpha,
  HAlphaY,
  PsiRatio,
};

namespace detail {

inline void require_finite(double v, const char* family, const char* param) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(family) + ": parameter " + param +
                                " must be finite");
  }
}

inline void require_positive(double v, const char* family, const char* param) {
  require_finite(v, family, param);
  if (v <= 0.0) {
    throw std::invalid_argument(std::string(family) + ": parameter " + param +
                                " must be positive");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace detail

class FamilySpec {
 public:
  using Storage =
      std::variant<CodingGainFamily, GeneralRatioFamily, ShiftedRootRatioFamily,
                   QiBergFamily, GstRatioFamily, GeneralPowerRatioFamily,
                   HBetaFamily, PAlphaFamily, HAlphaYFamily, PsiRatioFamily>;

  static FamilySpec coding_gain() { return FamilySpec(CodingGainFamily{}); }

  static FamilySpec general_ratio(double a, double b, double c) {
    detail::require_positive(a, "general-ratio", "a");
    detail::require_positive(b, "general-ratio", "b");
    detail::require_positive(c, "general-ratio", "c");
    return FamilySpec(GeneralRatioFamily{a, b, c});
  }

  static FamilySpec shifted_root_ratio(double alpha) {
    detail::require_finite(alpha, "shifted-root-ratio", "alpha");
    return FamilySpec(ShiftedRootRatioFamily{alpha});
  }

  static FamilySpec qi_berg() { return FamilySpec(QiBergFamily{}); }

  static FamilySpec gst_ratio(double s, double t) {
    detail::require_finite(s, "gst-ratio", "s");
    detail::require_finite(t, "gst-ratio", "t");
    if (s == t) {
      throw std::invalid_argument(
          "gst-ratio: parameters s and t must be distinct");
    }
    FamilySpec spec{GstRatioFamily{s, t}};
    if (spec.domain().empty()) {
      throw std::invalid_argument("gst-ratio: parameters leave an empty domain");
    }
    return spec;
  }

  static FamilySpec general_power_ratio(
      double a, double b, std::shared_ptr<const TabulatedBase> table = nullptr) {
    detail::require_finite(a, "general-power-ratio", "a");
    detail::require_finite(b, "general-power-ratio", "b");
    FamilySpec spec{GeneralPowerRatioFamily{a, b, std::move(table)}};
    if (spec.domain().empty()) {
      throw std::invalid_argument(
          "general-power-ratio: parameters leave an empty domain");
    }
    return spec;
  }

  static FamilySpec h_beta(double s, double t, double beta) {
    detail::require_finite(s, "h-beta", "s");
    detail::require_finite(t, "h-beta", "t");
    detail::require_finite(beta, "h-beta", "beta");
    if (s == t) {
      throw std::invalid_argument("h-beta: parameters s and t must be distinct");
    }
    if (!(beta > -std::min(s, t))) {
      throw std::invalid_argument("h-beta: beta must exceed -min(s, t)");
    }
    return FamilySpec(HBetaFamily{s, t, beta});
  }

  static FamilySpec p_alpha(double alpha) {
    detail::require_positive(alpha, "p-alpha", "alpha");
    return FamilySpec(PAlphaFamily{alpha});
  }

  static FamilySpec h_alpha_y(double alpha, double y) {
    detail::require_finite(alpha, "h-alpha-y", "alpha");
    detail::require_finite(y, "h-alpha-y", "y");
    if (!(y > -1.0)) {
      throw std::invalid_argument("h-alpha-y: parameter y must exceed -1");
    }
    return FamilySpec(HAlphaYFamily{alpha, y});
  }

  static FamilySpec psi_ratio(double s, double t) {
    detail::require_positive(s, "psi-ratio", "s");
    detail::require_positive(t, "psi-ratio", "t");
    return FamilySpec(PsiRatioFamily{s, t});
  }

  FamilyKind kind() const {
    return static_cast<FamilyKind>(storage_.index());
  }

  const Storage& storage() const { return storage_; }

  const char* name() const {
    static constexpr const char* kNames[] = {
        "coding-gain",    "general-ratio", "shifted-root-ratio",
        "qi-berg",        "gst-ratio",     "general-power-ratio",
        "h-beta",         "p-alpha",       "h-alpha-y",
        "psi-ratio"};
    return kNames[storage_.index()];
  }

  Interval domain() const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    return std::visit(
        detail::Overloaded{
            [&](const CodingGainFamily&) -> Interval { return {0.0, kInf}; },
            [&](const GeneralRatioFamily&) -> Interval { return {0.0, kInf}; },
            [&](const ShiftedRootRatioFamily& f) -> Interval {
              return {std::max(-1.0, -1.0 - f.alpha), kInf};
            },
            [&](const QiBergFamily&) -> Interval { return {0.0, kInf}; },
            [&](const GstRatioFamily& f) -> Interval {
              const Interval base{-1.0, kInf};
              return detail::intersect(detail::scale_preimage(base, f.s),
                                       detail::scale_preimage(base, f.t));
            },
            [&](const GeneralPowerRatioFamily& f) -> Interval {
              const Interval base =
                  f.table ? f.table->domain() : Interval{-1.0, kInf};
              return detail::intersect(detail::scale_preimage(base, f.a),
                                       detail::scale_preimage(base, f.b));
            },
            [&](const HBetaFamily& f) -> Interval {
              return {-std::min(f.s, f.t), kInf};
            },
            [&](const PAlphaFamily&) -> Interval { return {0.0, kInf}; },
            [&](const HAlphaYFamily& f) -> Interval {
              return {-f.y - 1.0, kInf};
            },
            [&](const PsiRatioFamily& f) -> Interval {
              return {-std::min(f.s, f.t), kInf};
            },
        },
        storage_);
  }

  // Points inside the domain where the defining formula has a removable
  // singularity and evaluation switches to the analytic limit.
  std::vector<double> removable_points() const {
    std::vector<double> pts;
    const Interval dom = domain();
    const auto add_if_inside = [&](double p) {
      if (dom.contains(p)) pts.push_back(p);
    };
    std::visit(detail::Overloaded{
                   [&](const ShiftedRootRatioFamily& f) {
                     add_if_inside(0.0);
                     if (f.alpha != 0.0) add_if_inside(-f.alpha);
                   },
                   [&](const HBetaFamily& f) { add_if_inside(f.beta); },
                   [&](const PAlphaFamily& f) { add_if_inside(f.alpha); },
                   [&](const HAlphaYFamily&) { add_if_inside(0.0); },
                   [&](const auto&) {},
               },
               storage_);
    return pts;
  }

  std::string text() const;

  static FamilySpec parse(std::string_view text);

  // Copy with one named parameter replaced; validation reruns.
  FamilySpec with_parameter(std::string_view param, double value) const;

 private:
  explicit FamilySpec(Storage s) : storage_(std::move(s)) {}

  Storage storage_;
};

namespace detail {

inline std::string emit_c(double c) {
  if (c == logmono::detail::kTwoSqrtPi) return "2sqrtpi";
  if (c == logmono::detail::kSqrtPi) return "sqrtpi";
  return logmono::detail::format_real(c);
}

}  // namespace detail

inline std::string FamilySpec::text() const {
  using logmono::detail::format_real;
  return std::visit(
      detail::Overloaded{
          [&](const CodingGainFamily&) -> std::string { return "coding-gain"; },
          [&](const GeneralRatioFamily& f) -> std::string {
            return "general-ratio:a=" + format_real(f.a) +
                   ",b=" + format_real(f.b) + ",c=" + detail::emit_c(f.c);
          },
          [&](const ShiftedRootRatioFamily& f) -> std::string {
            return "shifted-root-ratio:alpha=" + format_real(f.alpha);
          },
          [&](const QiBergFamily&) -> std::string { return "qi-berg"; },
          [&](const GstRatioFamily& f) -> std::string {
            return "gst-ratio:s=" + format_real(f.s) + ",t=" + format_real(f.t);
          },
          [&](const GeneralPowerRatioFamily& f) -> std::string {
            return "general-power-ratio:a=" + format_real(f.a) +
                   ",b=" + format_real(f.b) +
                   ",base=" + (f.table ? "table:" + f.table->path
                                       : std::string("gamma-shift"));
          },
          [&](const HBetaFamily& f) -> std::string {
            return "h-beta:s=" + format_real(f.s) + ",t=" + format_real(f.t) +
                   ",beta=" + format_real(f.beta);
          },
          [&](const PAlphaFamily& f) -> std::string {
            return "p-alpha:alpha=" + format_real(f.alpha);
          },
          [&](const HAlphaYFamily& f) -> std::string {
            return "h-alpha-y:alpha=" + format_real(f.alpha) +
                   ",y=" + format_real(f.y);
          },
          [&](const PsiRatioFamily& f) -> std::string {
            return "psi-ratio:s=" + format_real(f.s) + ",t=" + format_real(f.t);
          },
      },
      storage_);
}

namespace detail {

inline std::vector<std::pair<std::string, std::string>> parse_kv_list(
    std::string_view body) {
  std::vector<std::pair<std::string, std::string>> kv;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const std::size_t comma = body.find(',', pos);
    const std::string_view item =
        body.substr(pos, comma == std::string_view::npos ? body.size() - pos
                                                         : comma - pos);
    if (!item.empty()) {
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("family text: expected key=value, got '" +
                                    std::string(item) + "'");
      }
      kv.emplace_back(std::string(item.substr(0, eq)),
                      std::string(item.substr(eq + 1)));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return kv;
}

class KvReader {
 public:
  KvReader(std::string family, std::string_view body)
      : family_(std::move(family)), kv_(parse_kv_list(body)) {}

  double real(const std::string& key) {
    return logmono::detail::parse_real_token(raw(key), family_ + " " + key);
  }

  std::string raw(const std::string& key) {
    for (auto& [k, v] : kv_) {
      if (k == key) {
        if (used_.count(key) != 0) {
          throw std::invalid_argument(family_ + ": duplicate parameter " + key);
        }
        used_.insert(key);
        return v;
      }
    }
    throw std::invalid_argument(family_ + ": missing parameter " + key);
  }

  void finish() const {
    for (const auto& [k, v] : kv_) {
      if (used_.count(k) == 0) {
        throw std::invalid_argument(family_ + ": unknown parameter " + k);
      }
    }
    std::set<std::string> seen;
    for (const auto& [k, v] : kv_) {
      if (!seen.insert(k).second) {
        throw std::invalid_argument(family_ + ": duplicate parameter " + k);
      }
    }
  }

 private:
  std::string family_;
  std::vector<std::pair<std::string, std::string>> kv_;
  std::set<std::string> used_;
};

inline std::shared_ptr<const TabulatedBase> load_base_table(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("general-power-ratio: cannot open base table '" +
                                path + "'");
  }
  TabulatedBase table;
  table.path = path;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line == "x,f") continue;  // optional header
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument(
          "general-power-ratio: base table rows must be 'x,f', got '" + line +
          "'");
    }
    const double x = logmono::detail::parse_real_token(
        std::string_view(line).substr(0, comma), "base table x");
    const double f = logmono::detail::parse_real_token(
        std::string_view(line).substr(comma + 1), "base table f");
    if (!(f > 0.0) || !std::isfinite(f) || !std::isfinite(x)) {
      throw std::invalid_argument(
          "general-power-ratio: base table values must be finite and positive");
    }
    table.xs.push_back(x);
    table.ln_f.push_back(std::log(f));
  }
  if (table.xs.size() < 2) {
    throw std::invalid_argument(
        "general-power-ratio: base table needs at least two rows");
  }
  if (!std::is_sorted(table.xs.begin(), table.xs.end()) ||
      std::adjacent_find(table.xs.begin(), table.xs.end()) != table.xs.end()) {
    throw std::invalid_argument(
        "general-power-ratio: base table grid must be strictly ascending");
  }
  return std::make_shared<const TabulatedBase>(std::move(table));
}

}  // namespace detail

inline FamilySpec FamilySpec::parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string name(text.substr(0, colon));
  const std::string_view body =
      colon == std::string_view::npos ? std::string_view{}
                                      : text.substr(colon + 1);

  if (name == "coding-gain") {
    detail::KvReader kv(name, body);
    kv.finish();
    return coding_gain();
  }
  if (name == "general-ratio") {
    detail::KvReader kv(name, body);
    const double a = kv.real("a");
    const double b = kv.real("b");
    const double c = kv.real("c");
    kv.finish();
    return general_ratio(a, b, c);
  }
  if (name == "shifted-root-ratio") {
    detail::KvReader kv(name, body);
    const double alpha = kv.real("alpha");
    kv.finish();
    return shifted_root_ratio(alpha);
  }
  if (name == "qi-berg") {
    detail::KvReader kv(name, body);
    kv.finish();
    return qi_berg();
  }
  if (name == "gst-ratio") {
    detail::KvReader kv(name, body);
    const double s = kv.real("s");
    const double t = kv.real("t");
    kv.finish();
    return gst_ratio(s, t);
  }
  if (name == "general-power-ratio") {
    detail::KvReader kv(name, body);
    const double a = kv.real("a");
    const double b = kv.real("b");
    const std::string base = kv.raw("base");
    kv.finish();
    if (base == "gamma-shift") return general_power_ratio(a, b);
    if (base.rfind("table:", 0) == 0) {
      return general_power_ratio(a, b, detail::load_base_table(base.substr(6)));
    }
    throw std::invalid_argument(
        "general-power-ratio: base must be 'gamma-shift' or 'table:<path>'");
  }
  if (name == "h-beta") {
    detail::KvReader kv(name, body);
    const double s = kv.real("s");
    const double t = kv.real("t");
    const double beta = kv.real("beta");
    kv.finish();
    return h_beta(s, t, beta);
  }
  if (name == "p-alpha") {
    detail::KvReader kv(name, body);
    const double alpha = kv.real("alpha");
    kv.finish();
    return p_alpha(alpha);
  }
  if (name == "h-alpha-y") {
    detail::KvReader kv(name, body);
    const double alpha = kv.real("alpha");
    const double y = kv.real("y");
    kv.finish();
    return h_alpha_y(alpha, y);
  }
  if (name == "psi-ratio") {
    detail::KvReader kv(name, body);
    const double s = kv.real("s");
    const double t = kv.real("t");
    kv.finish();
    return psi_ratio(s, t);
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

inline FamilySpec FamilySpec::with_parameter(std::string_view param,
                                             double value) const {
  const std::string p(param);
  return std::visit(
      detail::Overloaded{
          [&](const GeneralRatioFamily& f) -> FamilySpec {
            if (p == "a") return general_ratio(value, f.b, f.c);
            if (p == "b") return general_ratio(f.a, value, f.c);
            if (p == "c") return general_ratio(f.a, f.b, value);
            throw std::invalid_argument("general-ratio has no parameter " + p);
          },
          [&](const ShiftedRootRatioFamily&) -> FamilySpec {
            if (p == "alpha") return shifted_root_ratio(value);
            throw std::invalid_argument("shifted-root-ratio has no parameter " +
                                        p);
          },
          [&](const GstRatioFamily& f) -> FamilySpec {
            if (p == "s") return gst_ratio(value, f.t);
            if (p == "t") return gst_ratio(f.s, value);
            throw std::invalid_argument("gst-ratio has no parameter " + p);
          },
          [&](const GeneralPowerRatioFamily& f) -> FamilySpec {
            if (p == "a") return general_power_ratio(value, f.b, f.table);
            if (p == "b") return general_power_ratio(f.a, value, f.table);
            throw std::invalid_argument("general-power-ratio has no parameter " +
                                        p);
          },
          [&](const HBetaFamily& f) -> FamilySpec {
            if (p == "s") return h_beta(value, f.t, f.beta);
            if (p == "t") return h_beta(f.s, value, f.beta);
            if (p == "beta") return h_beta(f.s, f.t, value);
            throw std::invalid_argument("h-beta has no parameter " + p);
          },
          [&](const PAlphaFamily&) -> FamilySpec {
            if (p == "alpha") return p_alpha(value);
            throw std::invalid_argument("p-alpha has no parameter " + p);
          },
          [&](const HAlphaYFamily& f) -> FamilySpec {
            if (p == "alpha") return h_alpha_y(value, f.y);
            if (p == "y") return h_alpha_y(f.alpha, value);
            throw std::invalid_argument("h-alpha-y has no parameter " + p);
          },
          [&](const PsiRatioFamily& f) -> FamilySpec {
            if (p == "s") return psi_ratio(value, f.t);
            if (p == "t") return psi_ratio(f.s, value);
            throw std::invalid_argument("psi-ratio has no parameter " + p);
          },
          [&](const auto&) -> FamilySpec {
            throw std::invalid_argument(std::string(name()) +
                                        " has no adjustable parameters");
          },
      },
      storage_);
}

namespace detail {

inline void require_in_domain(const FamilySpec& spec, double x,
                              const char* op) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(op) + ": argument must be finite");
  }
  if (!spec.domain().contains(x)) {
    throw std::domain_error(std::string(op) + ": " + std::string(spec.name()) +
                            " is not defined at x = " +
                            logmono::detail::format_real(x));
  }
}

// ln Gamma(y + 1) / y continued through y = 0 by its limit psi(1).
inline double lngamma1p_over(double y) {
  if (y == 0.0) return specfun::polygamma(0, 1.0);
  return specfun::ln_gamma(y + 1.0) / y;
}

}  // namespace detail

// Pointwise value of the family member, always a positive real.  The
// formulas are evaluated in log space and exponentiated once; removable
// points take their analytic limits.
inline double evaluate(const FamilySpec& spec, double x) {
  detail::require_in_domain(spec, x, "evaluate");
  using specfun::ln_gamma;
  using specfun::polygamma;
  const double ln_value = std::visit(
      detail::Overloaded{
          [&](const CodingGainFamily&) {
            // Product form: each factor carries its own 1/x power.
            const double ln_c = std::log(logmono::detail::kTwoSqrtPi);
            return ln_c / x + ln_gamma(x + 1.0) / x - ln_gamma(x + 0.5) / x;
          },
          [&](const GeneralRatioFamily& f) {
            return (std::log(f.c) + ln_gamma(x + f.a) - ln_gamma(x + f.b)) / x;
          },
          [&](const ShiftedRootRatioFamily& f) {
            return detail::lngamma1p_over(x + f.alpha) -
                   detail::lngamma1p_over(x);
          },
          [&](const QiBergFamily&) {
            return ln_gamma(x + 1.0) / x - std::log(x) +
                   x * std::log1p(1.0 / x);
          },
          [&](const GstRatioFamily& f) {
            return f.s * ln_gamma(1.0 + f.t * x) - f.t * ln_gamma(1.0 + f.s * x);
          },
          [&](const GeneralPowerRatioFamily& f) {
            if (f.table) {
              return f.a * f.table->ln_value(f.b * x) -
                     f.b * f.table->ln_value(f.a * x);
            }
            return f.a * ln_gamma(1.0 + f.b * x) - f.b * ln_gamma(1.0 + f.a * x);
          },
          [&](const HBetaFamily& f) {
            if (x == f.beta) {
              return polygamma(0, f.beta + f.s) - polygamma(0, f.beta + f.t);
            }
            return (ln_gamma(f.beta + f.t) - ln_gamma(f.beta + f.s) +
                    ln_gamma(x + f.s) - ln_gamma(x + f.t)) /
                   (x - f.beta);
          },
          [&](const PAlphaFamily& f) {
            if (x == f.alpha) {
              return polygamma(0, f.alpha + 1.0) - 1.0 - std::log(f.alpha);
            }
            return (ln_gamma(f.alpha + 1.0) - f.alpha * std::log(f.alpha) +
                    x * std::log(x) - ln_gamma(x + 1.0)) /
                   (f.alpha - x);
          },
          [&](const HAlphaYFamily& f) {
            if (x == 0.0) {
              return polygamma(0, f.y + 1.0) - f.alpha * std::log1p(f.y);
            }
            return -f.alpha * std::log(x + f.y + 1.0) +
                   (ln_gamma(x + f.y + 1.0) - ln_gamma(f.y + 1.0)) / x;
          },
          [&](const PsiRatioFamily& f) {
            if (f.s == f.t) return polygamma(0, x + f.s);
            return (ln_gamma(x + f.t) - ln_gamma(x + f.s)) / (f.t - f.s);
          },
      },
      spec.storage());
  return std::exp(ln_value);
}

namespace detail {

// Series of x -> x + offset at x0.
inline PolySeries linear_term(double x0, double offset, int order) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[0] = x0 + offset;
  if (order >= 1) c[1] = 1.0;
  return PolySeries(x0, std::move(c));
}

// Series of x -> ln(x + offset) at x0; requires x0 + offset > 0.
inline PolySeries log_term(double x0, double offset, int order) {
  return series::ln_series(linear_term(x0, offset, order));
}

// Series at x0 of x -> ln Gamma(1 + s * x) through the linear substitution.
inline PolySeries lngamma_scaled(double x0, double s, int order) {
  return series::compose_linear(series::from_lngamma(s * x0, 1.0, order), s,
                                x0);
}

// m-th Taylor coefficient of y -> ln Gamma(y) about z > 0, i.e.
// psi^{(m-1)}(z) / m!.  Orders through 12 go through polygamma(); higher
// orders use the defining sum
//   psi^{(m-1)}(z) / m! = (-1)^m (1/m) sum_{j>=0} (z + j)^{-m},
// truncated with an Euler-Maclaurin closure.  The sum converges in a few
// dozen terms once m is large, and sidesteps polygamma's order ceiling.
inline double lngamma_series_coeff(double z, int m) {
  if (m <= 12) {
    return specfun::polygamma(m - 1, z) / logmono::detail::factorial(m);
  }
  const double dm = static_cast<double>(m);
  logmono::detail::NeumaierSum sum;
  int j = 0;
  for (; j < 400; ++j) {
    const double term = std::pow(z + j, -dm);
    sum.add(term);
    if (term <= 1e-19 * sum.value()) {
      ++j;
      break;
    }
  }
  const double edge = z + j;
  sum.add(std::pow(edge, 1.0 - dm) / (dm - 1.0));
  sum.add(0.5 * std::pow(edge, -dm));
  sum.add(dm / 12.0 * std::pow(edge, -dm - 1.0));
  const double magnitude = sum.value() / dm;
  return (m % 2 == 0) ? magnitude : -magnitude;
}

// Series at x0 of the quotient N(x) / (x - r), where the numerator N
// vanishes at the removable point r and its nearest real singularity sits
// below x0 at `singularity`.  `coeff(m)` must return the m-th Taylor
// coefficient of N at x0 for any m this routine asks for.
//
// Near the removable point, plain series division amplifies the absolute
// rounding error of the leading coefficient by |x0 - r|^{-(k+1)}; because
// N(r) = 0 the true quotient coefficients stay bounded, so that noise
// swamps them within a unit or so of r.  There the coefficients are
// accumulated instead from the exact rearrangement
//   q_k = sum_{j>=0} n_{k+1+j} * (-(x0 - r))^j,
// whose terms decay geometrically at rate |x0 - r| / (x0 - singularity)
// and, for x0 > r, share one sign, so nothing cancels.  Away from r the
// rearrangement converges too slowly and plain division is already
// accurate, so the routine switches on the decay ratio.
inline PolySeries removable_quotient_series(
    double x0, double r, double singularity,
    const std::function<double(int)>& coeff, int order) {
  const double d = x0 - r;
  const double radius = x0 - singularity;
  const double ratio = std::abs(d) / radius;
  if (ratio > 0.6) {
    std::vector<double> n(static_cast<std::size_t>(order) + 1);
    for (int m = 0; m <= order; ++m) {
      n[static_cast<std::size_t>(m)] = coeff(m);
    }
    return series::div(PolySeries(x0, std::move(n)),
                       linear_term(x0, -r, order));
  }
  // ratio <= 0.6 bounds the term count near 84.
  const int tail_len =
      std::max(12, static_cast<int>(std::log(1e-18) / std::log(ratio)) + 2);
  const int m_max = order + 1 + tail_len;
  std::vector<double> n(static_cast<std::size_t>(m_max) + 1, 0.0);
  for (int m = 1; m <= m_max; ++m) {
    n[static_cast<std::size_t>(m)] = coeff(m);
  }
  std::vector<double> q(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    logmono::detail::NeumaierSum acc;
    double power = 1.0;
    for (int j = 0; k + 1 + j <= m_max; ++j) {
      acc.add(n[static_cast<std::size_t>(k + 1 + j)] * power);
      power *= -d;
    }
    q[static_cast<std::size_t>(k)] = acc.value();
  }
  return PolySeries(x0, std::move(q));
}

// q(y) = ln Gamma(y + 1) / y as a series in x at x0, where y = x + offset;
// the removable point y = 0 sits at x = -offset and the log-gamma
// singularity at x = -offset - 1.
inline PolySeries lngamma1p_over_series(double x0, double offset, int order) {
  const double anchor = x0 + offset + 1.0;
  auto coeff = [&](int m) {
    if (m == 0) return specfun::ln_gamma(anchor);
    return lngamma_series_coeff(anchor, m);
  };
  return removable_quotient_series(x0, -offset, -offset - 1.0, coeff, order);
}

}  // namespace detail

// Truncated power series of ln f at an interior point x0, trustworthy for
// derivative extraction up to the given order.  Refuses expansion points
// within 1e-3 of a removable singularity, where the assembled
// coefficients lose too many digits to cancellation.
inline PolySeries ln_series_at(const FamilySpec& spec, double x0, int order) {
  detail::require_in_domain(spec, x0, "ln_series_at");
  if (order < 0 || order > series::kMaxSeriesOrder) {
    throw std::invalid_argument(
        "ln_series_at: order must lie in [0, " +
        std::to_string(series::kMaxSeriesOrder) + "]");
  }
  for (double r : spec.removable_points()) {
    if (std::abs(x0 - r) < 1e-3 && x0 != r) {
      throw std::domain_error(
          "ln_series_at: expansion point within 1e-3 of the removable point " +
          logmono::detail::format_real(r) +
          "; coefficients would be dominated by cancellation");
    }
    if (x0 == r) {
      throw std::domain_error(
          "ln_series_at: series expansion at a removable point is not "
          "supported");
    }
  }

  using series::add;
  using series::div;
  using series::from_lngamma;
  using series::mul;
  using series::scale;
  using series::sub;
  using series::PolySeries;
  const int K = order;

  return std::visit(
      detail::Overloaded{
          [&](const CodingGainFamily&) {
            const double ln_c = std::log(logmono::detail::kTwoSqrtPi);
            const PolySeries numerator =
                add(PolySeries::constant(x0, ln_c, K),
                    sub(from_lngamma(x0, 1.0, K), from_lngamma(x0, 0.5, K)));
            return div(numerator, detail::linear_term(x0, 0.0, K));
          },
          [&](const GeneralRatioFamily& f) {
            const PolySeries numerator =
                add(PolySeries::constant(x0, std::log(f.c), K),
                    sub(from_lngamma(x0, f.a, K), from_lngamma(x0, f.b, K)));
            return div(numerator, detail::linear_term(x0, 0.0, K));
          },
          [&](const ShiftedRootRatioFamily& f) {
            return sub(detail::lngamma1p_over_series(x0, f.alpha, K),
                       detail::lngamma1p_over_series(x0, 0.0, K));
          },
          [&](const QiBergFamily&) {
            const PolySeries first = detail::lngamma1p_over_series(x0, 0.0, K);
            const PolySeries log_x = detail::log_term(x0, 0.0, K);
            const PolySeries bracket =
                sub(detail::log_term(x0, 1.0, K), log_x);
            return add(sub(first, log_x),
                       mul(detail::linear_term(x0, 0.0, K), bracket));
          },
          [&](const GstRatioFamily& f) {
            return sub(scale(detail::lngamma_scaled(x0, f.t, K), f.s),
                       scale(detail::lngamma_scaled(x0, f.s, K), f.t));
          },
          [&](const GeneralPowerRatioFamily& f) -> PolySeries {
            if (f.table) {
              throw std::invalid_argument(
                  "ln_series_at: a tabulated base carries no smooth series");
            }
            return sub(scale(detail::lngamma_scaled(x0, f.b, K), f.a),
                       scale(detail::lngamma_scaled(x0, f.a, K), f.b));
          },
          [&](const HBetaFamily& f) {
            const double shift = specfun::ln_gamma(f.beta + f.t) -
                                 specfun::ln_gamma(f.beta + f.s);
            auto coeff = [&](int m) {
              if (m == 0) {
                return shift + specfun::ln_gamma(x0 + f.s) -
                       specfun::ln_gamma(x0 + f.t);
              }
              return detail::lngamma_series_coeff(x0 + f.s, m) -
                     detail::lngamma_series_coeff(x0 + f.t, m);
            };
            return detail::removable_quotient_series(
                x0, f.beta, -std::min(f.s, f.t), coeff, K);
          },
          [&](const PAlphaFamily& f) {
            const double head = specfun::ln_gamma(f.alpha + 1.0) -
                                f.alpha * std::log(f.alpha);
            auto coeff = [&](int m) {
              if (m == 0) {
                return head + x0 * std::log(x0) - specfun::ln_gamma(x0 + 1.0);
              }
              if (m == 1) {
                return std::log(x0) + 1.0 - specfun::polygamma(0, x0 + 1.0);
              }
              // m-th coefficient of x ln x at x0 is (-1)^m/(m(m-1)x0^{m-1}).
              const double x_ln_x =
                  ((m % 2 == 0) ? 1.0 : -1.0) /
                  (static_cast<double>(m) * (m - 1.0) *
                   std::pow(x0, static_cast<double>(m - 1)));
              return x_ln_x - detail::lngamma_series_coeff(x0 + 1.0, m);
            };
            // ln p = N(x)/(alpha - x) = -N(x)/(x - alpha); the x ln x term
            // puts the numerator's nearest singularity at 0.
            return scale(detail::removable_quotient_series(x0, f.alpha, 0.0,
                                                           coeff, K),
                         -1.0);
          },
          [&](const HAlphaYFamily& f) {
            auto coeff = [&](int m) {
              if (m == 0) {
                return specfun::ln_gamma(x0 + f.y + 1.0) -
                       specfun::ln_gamma(f.y + 1.0);
              }
              return detail::lngamma_series_coeff(x0 + f.y + 1.0, m);
            };
            const PolySeries ratio = detail::removable_quotient_series(
                x0, 0.0, -f.y - 1.0, coeff, K);
            return add(scale(detail::log_term(x0, f.y + 1.0, K), -f.alpha),
                       ratio);
          },
          [&](const PsiRatioFamily& f) -> PolySeries {
            if (f.s == f.t) {
              std::vector<double> derivs(static_cast<std::size_t>(K) + 1);
              for (int j = 0; j <= K; ++j) {
                derivs[static_cast<std::size_t>(j)] =
                    specfun::polygamma(j, x0 + f.s);
              }
              return PolySeries::from_derivatives(x0, derivs);
            }
            if (std::abs(f.s - f.t) < 1e-3) {
              throw std::domain_error(
                  "ln_series_at: psi-ratio with 0 < |s - t| < 1e-3 loses too "
                  "many digits; use s = t for the confluent form");
            }
            return scale(sub(from_lngamma(x0, f.t, K), from_lngamma(x0, f.s, K)),
                         1.0 / (f.t - f.s));
          },
      },
      spec.storage());
}

// Discrete-plus-polar representation of a Stieltjes transform:
//   f(x) = a / x + b + sum_i w_i / (s_i + x)
// with a, b >= 0, atoms at -s_i < 0 carrying positive weights.
class MeasureRep {
 public:
  struct Atom {
    double s;
    double w;
  };

  MeasureRep(double a, double b, std::vector<Atom> atoms)
      : a_(a), b_(b), atoms_(std::move(atoms)) {
    if (!std::isfinite(a_) || a_ < 0.0 || !std::isfinite(b_) || b_ < 0.0) {
      throw std::invalid_argument(
          "MeasureRep: coefficients a and b must be finite and nonnegative");
    }
    double mass = a_ + b_;
    for (const Atom& atom : atoms_) {
      if (!std::isfinite(atom.s) || atom.s <= 0.0 || !std::isfinite(atom.w) ||
          atom.w <= 0.0) {
        throw std::invalid_argument(
            "MeasureRep: atoms need positive locations and positive weights");
      }
      mass += atom.w;
    }
    if (!(mass > 0.0)) {
      throw std::invalid_argument(
          "MeasureRep: the zero measure is not a valid representation");
    }
  }

  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  std::string text() const {
    using logmono::detail::format_real;
    std::string out =
        "stieltjes:a=" + format_real(a_) + ",b=" + format_real(b_) + ",atoms=";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i > 0) out += ';';
      out += format_real(atoms_[i].s) + ":" + format_real(atoms_[i].w);
    }
    return out;
  }

  static MeasureRep parse(std::string_view text) {
    constexpr std::string_view prefix = "stieltjes:";
    if (text.rfind(prefix, 0) != 0) {
      throw std::invalid_argument(
          "measure text must start with 'stieltjes:', got '" +
          std::string(text) + "'");
    }
    detail::KvReader kv("stieltjes", text.substr(prefix.size()));
    const double a = kv.real("a");
    const double b = kv.real("b");
    const std::string atoms_text = kv.raw("atoms");
    kv.finish();

    std::vector<Atom> atoms;
    std::size_t pos = 0;
    while (pos < atoms_text.size()) {
      const std::size_t semi = atoms_text.find(';', pos);
      const std::string item = atoms_text.substr(
          pos, semi == std::string::npos ? std::string::npos : semi - pos);
      const std::size_t colon = item.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument(
            "stieltjes atoms must be 'location:weight', got '" + item + "'");
      }
      atoms.push_back(
          {logmono::detail::parse_real_token(
               std::string_view(item).substr(0, colon), "atom location"),
           logmono::detail::parse_real_token(
               std::string_view(item).substr(colon + 1), "atom weight")});
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
    return MeasureRep(a, b, std::move(atoms));
  }

 private:
  double a_;
  double b_;
  std::vector<Atom> atoms_;
};

inline double stieltjes_evaluate(const MeasureRep& m, double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error(
        "stieltjes_evaluate: x must be a positive finite real");
  }
  logmono::detail::NeumaierSum acc;
  if (m.a() != 0.0) acc.add(m.a() / x);
  acc.add(m.b());
  for (const auto& atom : m.atoms()) acc.add(atom.w / (atom.s + x));
  return acc.value();
}

// k-th derivative in closed form:
//   f^(k)(x) = (-1)^k k! [ a / x^{k+1} + sum_i w_i / (s_i + x)^{k+1} ]
// (the constant b only survives at k = 0).
inline double stieltjes_kth_derivative(const MeasureRep& m, int k, double x) {
  if (k < 0) {
    throw std::invalid_argument("stieltjes_kth_derivative: negative order");
  }
  if (k == 0) return stieltjes_evaluate(m, x);
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error(
        "stieltjes_kth_derivative: x must be a positive finite real");
  }
  logmono::detail::NeumaierSum acc;
  if (m.a() != 0.0) acc.add(m.a() * std::pow(x, -(k + 1.0)));
  for (const auto& atom : m.atoms()) {
    acc.add(atom.w * std::pow(atom.s + x, -(k + 1.0)));
  }
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * logmono::detail::factorial(k) * acc.value();
}

inline PolySeries stieltjes_ln_series_at(const MeasureRep& m, double x0,
                                         int order) {
  if (!std::isfinite(x0) || x0 <= 0.0) {
    throw std::domain_error(
        "stieltjes_ln_series_at: expansion point must be positive");
  }
  if (order < 0 || order > series::kMaxSeriesOrder) {
    throw std::invalid_argument(
        "stieltjes_ln_series_at: order must lie in [0, " +
        std::to_string(series::kMaxSeriesOrder) + "]");
  }
  // Taylor coefficients of f itself: c[k] = f^(k)(x0) / k!.
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    logmono::detail::NeumaierSum acc;
    if (m.a() != 0.0) acc.add(m.a() * std::pow(x0, -(k + 1.0)));
    for (const auto& atom : m.atoms()) {
      acc.add(atom.w * std::pow(atom.s + x0, -(k + 1.0)));
    }
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(k)] = sign * acc.value();
    if (k == 0) c[0] += m.b();
  }
  return series::ln_series(PolySeries(x0, std::move(c)));
}

}  // namespace families
}  // namespace logmono
