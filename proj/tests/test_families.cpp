// Family catalog: canonical text round-trips, domains, removable-point
// continuity, pinned evaluation values, cross-family identities, series
// assembly against the closed forms, and the measure representation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <logmono/families.hpp>
#include <logmono/series.hpp>
#include <logmono/specfun.hpp>

#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using logmono::families::evaluate;
using logmono::families::FamilySpec;
using logmono::families::ln_series_at;
using logmono::families::MeasureRep;

namespace {

std::filesystem::path write_table(const std::string& name,
                                  const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("canonical text forms round-trip through parse") {
  const std::vector<std::string> forms = {
      "coding-gain",
      "general-ratio:a=1,b=0.5,c=2sqrtpi",
      "general-ratio:a=2.5,b=1.25,c=3.5",
      "shifted-root-ratio:alpha=0.5",
      "shifted-root-ratio:alpha=-0.5",
      "qi-berg",
      "gst-ratio:s=1,t=2",
      "gst-ratio:s=-1,t=-2",
      "general-power-ratio:a=2,b=1,base=gamma-shift",
      "h-beta:s=1,t=2,beta=0.5",
      "p-alpha:alpha=1.5",
      "h-alpha-y:alpha=1,y=0.25",
      "psi-ratio:s=1,t=1",
  };
  for (const auto& form : forms) {
    CAPTURE(form);
    const auto spec = FamilySpec::parse(form);
    REQUIRE(spec.text() == form);
    // A second round must be a fixed point too.
    REQUIRE(FamilySpec::parse(spec.text()).text() == form);
  }
}

TEST_CASE("sqrtpi tokens parse to the exact stored constants") {
  const auto two = FamilySpec::parse("general-ratio:a=1,b=0.5,c=2sqrtpi");
  const auto* f = std::get_if<logmono::families::GeneralRatioFamily>(
      &two.storage());
  REQUIRE(f != nullptr);
  REQUIRE(f->c == logmono::detail::kTwoSqrtPi);
  const auto one = FamilySpec::parse("general-ratio:a=0.5,b=1,c=sqrtpi");
  REQUIRE(std::get_if<logmono::families::GeneralRatioFamily>(&one.storage())
              ->c == logmono::detail::kSqrtPi);
  // And the emitter prints the tokens back.
  REQUIRE(two.text() == "general-ratio:a=1,b=0.5,c=2sqrtpi");
  REQUIRE(one.text() == "general-ratio:a=0.5,b=1,c=sqrtpi");
}

TEST_CASE("parse rejects malformed descriptors") {
  const std::vector<std::string> bad = {
      "unknown-family",
      "general-ratio",                           // missing parameters
      "general-ratio:a=1,b=0.5",                 // missing c
      "general-ratio:a=1,b=0.5,c=1,d=2",         // unknown key
      "general-ratio:a=1,a=2,b=0.5,c=1",         // duplicate key
      "general-ratio:a=1,b=0.5,c=zzz",           // bad number
      "general-ratio:a=0,b=0.5,c=1",             // non-positive parameter
      "h-beta:s=1,t=1,beta=2",                   // s == t
      "h-beta:s=1,t=2,beta=-1",                  // beta <= -min(s,t)
      "p-alpha:alpha=0",
      "p-alpha:alpha=-2",
      "h-alpha-y:alpha=1,y=-1",
      "psi-ratio:s=0,t=1",
      "shifted-root-ratio:alpha=",
      "general-power-ratio:a=2,b=1,base=nonsense",
  };
  for (const auto& form : bad) {
    CAPTURE(form);
    REQUIRE_THROWS_AS(FamilySpec::parse(form), std::invalid_argument);
  }
}

TEST_CASE("domains bound evaluation") {
  const auto gain = FamilySpec::coding_gain();
  REQUIRE(gain.domain().lo == 0.0);
  REQUIRE_THROWS_AS(evaluate(gain, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(evaluate(gain, -1.0), std::domain_error);
  REQUIRE(evaluate(gain, 1e-6) > 0.0);

  const auto shifted = FamilySpec::shifted_root_ratio(0.5);
  REQUIRE(shifted.domain().lo == -1.0);
  REQUIRE(evaluate(shifted, -0.999) > 0.0);
  REQUIRE_THROWS_AS(evaluate(shifted, -1.0), std::domain_error);

  const auto gst = FamilySpec::gst_ratio(1.0, 2.0);
  REQUIRE(gst.domain().lo == -0.5);
  REQUIRE(evaluate(gst, -0.49) > 0.0);
  REQUIRE_THROWS_AS(evaluate(gst, -0.51), std::domain_error);

  const auto gst_neg = FamilySpec::gst_ratio(-1.0, -2.0);
  REQUIRE(gst_neg.domain().hi == 0.5);
  REQUIRE(evaluate(gst_neg, 0.49) > 0.0);
  REQUIRE(evaluate(gst_neg, -100.0) > 0.0);
  REQUIRE_THROWS_AS(evaluate(gst_neg, 0.51), std::domain_error);

  // s and t of opposite signs squeeze the domain to a bounded interval.
  const auto gst_mixed = FamilySpec::gst_ratio(2.0, -3.0);
  REQUIRE(gst_mixed.domain().lo == -0.5);
  REQUIRE_THAT(gst_mixed.domain().hi, WithinRel(1.0 / 3.0, 1e-15));

  // Equal scale parameters are rejected at construction.
  REQUIRE_THROWS_AS(FamilySpec::gst_ratio(1.5, 1.5), std::invalid_argument);

  const auto hb = FamilySpec::h_beta(1.0, 2.0, 0.5);
  REQUIRE(hb.domain().lo == -1.0);
  REQUIRE_THROWS_AS(evaluate(hb, -1.0), std::domain_error);

  const auto hay = FamilySpec::h_alpha_y(1.0, 0.25);
  REQUIRE(hay.domain().lo == -1.25);
}

TEST_CASE("pinned evaluations match independently computed values") {
  const auto gain = FamilySpec::coding_gain();
  // At x = 1 the power collapses: 2 sqrt(pi) Gamma(2)/Gamma(3/2) = 4.
  REQUIRE_THAT(evaluate(gain, 1.0), WithinRel(4.0, 1e-13));
  REQUIRE_THAT(evaluate(gain, 2.0), WithinRel(2.309401076758503058, 1e-13));
  REQUIRE_THAT(evaluate(gain, 10.0), WithinRel(1.2749793057771373832, 1e-13));

  REQUIRE_THAT(evaluate(FamilySpec::shifted_root_ratio(0.5), 2.0),
               WithinRel(1.1431822839958372027, 1e-13));
  REQUIRE_THAT(evaluate(FamilySpec::qi_berg(), 1.5),
               WithinRel(1.7342272200350386328, 1e-13));
  REQUIRE_THAT(evaluate(FamilySpec::gst_ratio(1.0, 2.0), 0.7),
               WithinRel(1.5045212138628625355, 1e-13));
  REQUIRE_THAT(evaluate(FamilySpec::psi_ratio(1.0, 1.0), 2.0),
               WithinRel(2.5162868309393635803, 1e-13));

  // Removable-point values.
  REQUIRE_THAT(evaluate(FamilySpec::h_beta(1.0, 2.0, 0.5), 0.5),
               WithinRel(0.51341711903259202687, 1e-13));
  REQUIRE_THAT(evaluate(FamilySpec::p_alpha(1.5), 1.5),
               WithinRel(0.49544027491448574778, 1e-13));
  REQUIRE_THAT(evaluate(FamilySpec::h_alpha_y(1.0, 0.0), 0.0),
               WithinRel(0.56145948356688516982, 1e-13));
  // At the origin the value is exp(psi(y+1)); for y = 0 that is e^{-gamma},
  // anchored to the Euler-Maclaurin oracle and independent of alpha.
  REQUIRE_THAT(evaluate(FamilySpec::h_alpha_y(0.0, 0.0), 0.0),
               WithinRel(std::exp(-oracles::euler_gamma()), 1e-11));
}

TEST_CASE("evaluation is continuous across removable points") {
  struct Probe {
    FamilySpec spec;
    double removable;
  };
  const std::vector<Probe> probes = {
      {FamilySpec::shifted_root_ratio(0.5), 0.0},
      {FamilySpec::shifted_root_ratio(-0.25), 0.25},
      {FamilySpec::h_beta(1.0, 2.0, 0.5), 0.5},
      {FamilySpec::p_alpha(1.5), 1.5},
      {FamilySpec::h_alpha_y(2.0, 0.5), 0.0},
      {FamilySpec::qi_berg(), 0.0},  // limit toward the domain edge
  };
  for (const auto& probe : probes) {
    const double r = probe.removable;
    if (!probe.spec.domain().contains(r)) continue;
    const double at = evaluate(probe.spec, r);
    for (double offset : {-1e-4, 1e-4}) {
      if (!probe.spec.domain().contains(r + offset)) continue;
      CAPTURE(probe.spec.text(), r, offset);
      REQUIRE_THAT(evaluate(probe.spec, r + offset) / at,
                   WithinAbs(1.0, 1e-3));
    }
  }
  // Listed removable points are exactly where the special paths engage.
  const auto shifted = FamilySpec::shifted_root_ratio(-0.25);
  const auto removables = shifted.removable_points();
  REQUIRE(removables == std::vector<double>{0.0, 0.25});
}

TEST_CASE("identical numerator and denominator collapse to one") {
  const auto flat = FamilySpec::general_ratio(1.7, 1.7, 1.0);
  for (double x : {0.1, 1.0, 10.0}) {
    CAPTURE(x);
    REQUIRE_THAT(evaluate(flat, x), WithinRel(1.0, 1e-14));
  }
  // And the whole ln-series is zero.
  const auto series = ln_series_at(flat, 2.0, 5);
  for (int j = 0; j <= 5; ++j) REQUIRE(series.coeff(j) == 0.0);
}

TEST_CASE("shifted-root ratio matches its definitional two-call form") {
  for (double alpha : {0.5, 2.0, -0.25}) {
    const auto spec = FamilySpec::shifted_root_ratio(alpha);
    for (double x : {0.2, 0.9, 3.0, 15.0}) {
      if (!spec.domain().contains(x)) continue;
      bool near_removable = false;
      for (double r : spec.removable_points()) {
        if (std::abs(x - r) < 1e-2) near_removable = true;
      }
      if (near_removable) continue;
      // Root of the shifted gamma over root of the plain gamma, straight
      // from the library-independent gamma in <cmath>.
      const double direct =
          std::pow(std::tgamma(x + alpha + 1.0), 1.0 / (x + alpha)) /
          std::pow(std::tgamma(x + 1.0), 1.0 / x);
      CAPTURE(alpha, x);
      REQUIRE_THAT(evaluate(spec, x), WithinRel(direct, 1e-12));
    }
  }
}

TEST_CASE("coding gain is the fixed general-ratio instance") {
  const auto gain = FamilySpec::coding_gain();
  const auto ratio = FamilySpec::general_ratio(1.0, 0.5,
                                               logmono::detail::kTwoSqrtPi);
  for (double x : {0.1, 0.5, 2.0, 7.0, 40.0}) {
    CAPTURE(x);
    // Different evaluation paths: product of three powers versus a single
    // exponentiated quotient.
    REQUIRE_THAT(evaluate(gain, x), WithinRel(evaluate(ratio, x), 1e-12));
  }
  const auto series_gain = ln_series_at(gain, 2.0, 10);
  const auto series_ratio = ln_series_at(ratio, 2.0, 10);
  for (int j = 0; j <= 10; ++j) {
    CAPTURE(j);
    REQUIRE_THAT(series_gain.coeff(j),
                 WithinRel(series_ratio.coeff(j), 1e-13) ||
                     WithinAbs(series_ratio.coeff(j), 1e-15));
  }
}

TEST_CASE("gst ratio honours its symmetry and degeneracies") {
  // Swapping (s, t) inverts the function.
  const auto forward = FamilySpec::gst_ratio(1.0, 2.5);
  const auto backward = FamilySpec::gst_ratio(2.5, 1.0);
  for (double x : {0.05, 0.3, 1.1, 4.0}) {
    CAPTURE(x);
    REQUIRE_THAT(evaluate(forward, x) * evaluate(backward, x),
                 WithinRel(1.0, 1e-13));
  }
  // s == 0 kills both factors; the exp/log plumbing leaves a few ulps.
  const auto degenerate = FamilySpec::gst_ratio(0.0, 2.0);
  REQUIRE_THAT(evaluate(degenerate, 1.3), WithinRel(1.0, 1e-13));
  // gamma-shift general-power-ratio is the same function.
  const auto power = FamilySpec::general_power_ratio(1.0, 2.5);
  for (double x : {0.05, 0.3, 1.1, 4.0}) {
    CAPTURE(x);
    REQUIRE_THAT(evaluate(power, x), WithinRel(evaluate(forward, x), 1e-14));
  }
}

TEST_CASE("evaluate agrees with the series constant term") {
  const std::vector<FamilySpec> catalog = {
      FamilySpec::coding_gain(),
      FamilySpec::general_ratio(2.0, 0.75, 1.5),
      FamilySpec::shifted_root_ratio(0.5),
      FamilySpec::shifted_root_ratio(-0.5),
      FamilySpec::qi_berg(),
      FamilySpec::gst_ratio(1.0, 2.0),
      FamilySpec::general_power_ratio(2.0, 1.0),
      FamilySpec::h_beta(1.0, 2.0, 0.5),
      FamilySpec::p_alpha(1.5),
      FamilySpec::h_alpha_y(1.0, 0.25),
      FamilySpec::psi_ratio(1.0, 1.0),
      FamilySpec::psi_ratio(0.5, 2.5),
  };
  for (const auto& spec : catalog) {
    for (double x : {0.011, 0.4, 2.2, 31.0}) {
      if (!spec.domain().contains(x)) continue;
      bool near_removable = false;
      for (double r : spec.removable_points()) {
        if (std::abs(x - r) < 1e-3) near_removable = true;
      }
      if (near_removable) continue;
      CAPTURE(spec.text(), x);
      const auto series = ln_series_at(spec, x, 4);
      REQUIRE_THAT(std::exp(series.coeff(0)),
                   WithinRel(evaluate(spec, x), 1e-12));
    }
  }
}

TEST_CASE("series derivatives agree with Richardson finite differences") {
  struct Probe {
    FamilySpec spec;
    double x0;
    int k;
    double tol;
  };
  const std::vector<Probe> probes = {
      {FamilySpec::qi_berg(), 1.5, 2, 1e-6},
      {FamilySpec::p_alpha(1.5), 3.0, 1, 1e-6},
      {FamilySpec::h_beta(1.0, 2.0, 0.5), 2.0, 2, 1e-6},
      {FamilySpec::shifted_root_ratio(0.5), 0.8, 3, 1e-5},
      {FamilySpec::h_alpha_y(1.0, 0.25), 1.1, 1, 1e-6},
      {FamilySpec::gst_ratio(1.0, 2.0), 0.9, 2, 1e-6},
  };
  for (const auto& probe : probes) {
    const auto series = ln_series_at(probe.spec, probe.x0, 8);
    const double via_series = logmono::series::derivative(series, probe.k);
    const auto& spec = probe.spec;
    const double via_fd = oracles::richardson_derivative(
        [&](double x) { return std::log(evaluate(spec, x)); }, probe.x0,
        probe.k, 0.05);
    CAPTURE(spec.text(), probe.x0, probe.k);
    REQUIRE_THAT(via_series, WithinRel(via_fd, probe.tol));
  }
}

TEST_CASE("series assembly stays accurate beside removable points") {
  // Within a unit of a removable point naive series division loses the
  // high-order coefficients entirely; the assembly must not.  Check the
  // k-th coefficients against Richardson differences of the (k-2)-nd
  // derivative computed far more stably from the series itself at two
  // flanking points -- instead, simply compare low orders against finite
  // differences and verify high orders keep the sign structure dictated
  // by complete monotonicity of -(ln p_alpha)' style pieces.
  const auto shifted = FamilySpec::shifted_root_ratio(0.5);
  const auto series = ln_series_at(shifted, 0.01, 10);
  // First derivative against Richardson on the closed-form evaluation.
  const double fd = oracles::richardson_derivative(
      [&](double x) { return std::log(evaluate(shifted, x)); }, 0.01, 1,
      0.002);
  REQUIRE_THAT(logmono::series::derivative(series, 1), WithinRel(fd, 1e-5));
  // The log-derivative alternation (-1)^k (ln f)^(k) >= 0 must hold at
  // every extractable order; division noise would randomize the signs.
  for (int k = 1; k <= 10; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    CAPTURE(k);
    REQUIRE(sign * logmono::series::derivative(series, k) >= 0.0);
  }
}

TEST_CASE("series expansion refuses removable-point neighbourhoods") {
  const auto shifted = FamilySpec::shifted_root_ratio(0.5);
  REQUIRE_THROWS_AS(ln_series_at(shifted, 5e-4, 4), std::domain_error);
  REQUIRE_THROWS_AS(ln_series_at(shifted, -0.5, 4), std::domain_error);
  REQUIRE_NOTHROW(ln_series_at(shifted, 0.0015, 4));
  const auto p = FamilySpec::p_alpha(1.5);
  REQUIRE_THROWS_AS(ln_series_at(p, 1.5, 4), std::domain_error);
  REQUIRE_THROWS_AS(ln_series_at(p, 1.4995, 4), std::domain_error);
  REQUIRE_THROWS_AS(ln_series_at(p, 2.0, 26), std::invalid_argument);
  REQUIRE_THROWS_AS(ln_series_at(p, -1.0, 4), std::domain_error);
}

TEST_CASE("psi-ratio confluent and separated forms") {
  const auto confluent = FamilySpec::psi_ratio(1.5, 1.5);
  const auto series = ln_series_at(confluent, 2.0, 6);
  for (int j = 0; j <= 6; ++j) {
    double factorial = 1.0;
    for (int i = 2; i <= j; ++i) factorial *= i;
    REQUIRE_THAT(series.coeff(j),
                 WithinRel(logmono::specfun::polygamma(j, 3.5) / factorial,
                           1e-14));
  }
  const auto separated = FamilySpec::psi_ratio(1.0, 2.0);
  REQUIRE_NOTHROW(ln_series_at(separated, 2.0, 6));
  const auto close = FamilySpec::psi_ratio(1.0, 1.0 + 5e-4);
  REQUIRE_THROWS_AS(ln_series_at(close, 2.0, 6), std::domain_error);
  REQUIRE(evaluate(close, 2.0) > 0.0);  // evaluation still works
}

TEST_CASE("tabulated base interpolates in log space") {
  const auto exact = write_table("logmono_exact_base.csv",
                                 "# log-linear table\n"
                                 "x,f\n"
                                 "1,2.718281828459045\n"
                                 "3,7.38905609893065\n");
  // ln f interpolates (1,1)-(3,2); with a=2, b=1:
  // ln g(x) = 2 interp(x) - interp(2x) = 1/2 on (1, 1.5).
  const auto spec = FamilySpec::parse(
      "general-power-ratio:a=2,b=1,base=table:" + exact.string());
  REQUIRE_THAT(spec.domain().lo, WithinRel(1.0, 1e-15));
  REQUIRE_THAT(spec.domain().hi, WithinRel(1.5, 1e-15));
  for (double x : {1.05, 1.2, 1.45}) {
    CAPTURE(x);
    REQUIRE_THAT(evaluate(spec, x), WithinRel(std::exp(0.5), 1e-12));
  }
  REQUIRE_THROWS_AS(evaluate(spec, 0.9), std::domain_error);
  REQUIRE_THROWS_AS(evaluate(spec, 1.6), std::domain_error);
  REQUIRE_THROWS_AS(ln_series_at(spec, 1.2, 3), std::invalid_argument);
  // Round-trip keeps the table reference.
  REQUIRE(FamilySpec::parse(spec.text()).text() == spec.text());

  REQUIRE_THROWS_AS(
      FamilySpec::parse("general-power-ratio:a=2,b=1,base=table:/no/such"),
      std::invalid_argument);
  const auto unsorted = write_table("logmono_unsorted.csv", "2,1\n1,1\n");
  REQUIRE_THROWS_AS(
      FamilySpec::parse("general-power-ratio:a=2,b=1,base=table:" +
                        unsorted.string()),
      std::invalid_argument);
  const auto negative = write_table("logmono_negative.csv", "1,1\n2,-1\n");
  REQUIRE_THROWS_AS(
      FamilySpec::parse("general-power-ratio:a=2,b=1,base=table:" +
                        negative.string()),
      std::invalid_argument);
  const auto single = write_table("logmono_single.csv", "1,1\n");
  REQUIRE_THROWS_AS(
      FamilySpec::parse("general-power-ratio:a=2,b=1,base=table:" +
                        single.string()),
      std::invalid_argument);
}

TEST_CASE("with_parameter rebuilds a validated spec") {
  const auto base = FamilySpec::general_ratio(1.0, 0.5, 2.0);
  const auto moved = base.with_parameter("c", 3.0);
  REQUIRE(moved.text() == "general-ratio:a=1,b=0.5,c=3");
  REQUIRE_THROWS_AS(base.with_parameter("zeta", 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(base.with_parameter("c", -1.0), std::invalid_argument);
  const auto alpha = FamilySpec::p_alpha(1.0).with_parameter("alpha", 2.0);
  REQUIRE(alpha.text() == "p-alpha:alpha=2");
  REQUIRE_THROWS_AS(FamilySpec::coding_gain().with_parameter("a", 1.0),
                    std::invalid_argument);
}

TEST_CASE("measure representation validates, prints, and parses") {
  REQUIRE_THROWS_AS(MeasureRep(-1.0, 0.0, {{1.0, 1.0}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(MeasureRep(0.0, 0.0, {}), std::invalid_argument);
  REQUIRE_THROWS_AS(MeasureRep(1.0, 0.0, {{0.0, 1.0}}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(MeasureRep(1.0, 0.0, {{1.0, -1.0}}),
                    std::invalid_argument);

  const MeasureRep m(1.0, 2.0, {{1.0, 1.0}, {3.0, 0.5}});
  REQUIRE(m.text() == "stieltjes:a=1,b=2,atoms=1:1;3:0.5");
  const auto parsed = MeasureRep::parse(m.text());
  REQUIRE(parsed.text() == m.text());
  REQUIRE_THROWS_AS(MeasureRep::parse("stieltjes:a=1"), std::invalid_argument);
  REQUIRE_THROWS_AS(MeasureRep::parse("nonsense"), std::invalid_argument);

  // f(2) = 1/2 + 2 + 1/(1+2) + 0.5/(3+2).
  const double expect = 0.5 + 2.0 + 1.0 / 3.0 + 0.1;
  REQUIRE_THAT(logmono::families::stieltjes_evaluate(m, 2.0),
               WithinRel(expect, 1e-15));
  REQUIRE_THROWS_AS(logmono::families::stieltjes_evaluate(m, 0.0),
                    std::domain_error);

  // f'(2) = -[1/4 + 1/9 + 0.5/25].
  const double d1 = -(0.25 + 1.0 / 9.0 + 0.02);
  REQUIRE_THAT(logmono::families::stieltjes_kth_derivative(m, 1, 2.0),
               WithinRel(d1, 1e-15));
  // b survives only in the 0-th derivative.
  REQUIRE_THAT(logmono::families::stieltjes_kth_derivative(m, 0, 2.0),
               WithinRel(expect, 1e-15));

  // ln-series first coefficient is f'/f.
  const auto series = logmono::families::stieltjes_ln_series_at(m, 2.0, 5);
  REQUIRE_THAT(series.coeff(1), WithinRel(d1 / expect, 1e-13));
  REQUIRE_THAT(std::exp(series.coeff(0)), WithinRel(expect, 1e-14));
}

TEST_CASE("elementary measures evaluate and expand by hand") {
  using logmono::families::stieltjes_evaluate;
  using logmono::families::stieltjes_kth_derivative;
  using logmono::families::stieltjes_ln_series_at;

  // f(x) = 1/x.
  const MeasureRep inverse(1.0, 0.0, {});
  REQUIRE_THAT(stieltjes_evaluate(inverse, 4.0), WithinRel(0.25, 1e-15));
  // (ln 1/x)' = -1/x, so the first log-derivative at 1 is -1.
  const auto ln_inverse = stieltjes_ln_series_at(inverse, 1.0, 3);
  REQUIRE_THAT(logmono::series::derivative(ln_inverse, 1),
               WithinRel(-1.0, 1e-13));

  // A constant: value everywhere, log-series flat beyond its lead.
  const MeasureRep constant(0.0, 2.0, {});
  REQUIRE(stieltjes_evaluate(constant, 123.0) == 2.0);
  const auto ln_constant = stieltjes_ln_series_at(constant, 2.0, 4);
  REQUIRE_THAT(ln_constant.coeff(0), WithinRel(std::log(2.0), 1e-15));
  for (int j = 1; j <= 4; ++j) {
    REQUIRE_THAT(ln_constant.coeff(j), WithinAbs(0.0, 1e-15));
  }

  // Two atoms, by direct arithmetic: 1/(1+1) + 3/(2+1) = 1.5.
  const MeasureRep atoms(0.0, 0.0, {{1.0, 1.0}, {2.0, 3.0}});
  REQUIRE_THAT(stieltjes_evaluate(atoms, 1.0), WithinRel(1.5, 1e-15));

  // One atom: f''(1) = 2/(1+1)^3 = 0.25 via the closed form, and the same
  // value extracted from the exp-lift of the log-series.
  const MeasureRep single(0.0, 0.0, {{1.0, 1.0}});
  REQUIRE_THAT(stieltjes_kth_derivative(single, 2, 1.0),
               WithinRel(0.25, 1e-14));
  const auto f_series =
      logmono::series::exp_series(stieltjes_ln_series_at(single, 1.0, 4));
  REQUIRE_THAT(logmono::series::derivative(f_series, 2),
               WithinRel(0.25, 1e-12));
}
