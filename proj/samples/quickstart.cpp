// Quick tour of the library: evaluate a catalog family, classify a
// parameter triple, run the default sign-table check, and cross-examine a
// series-extracted derivative against finite differences.

#include <cstdio>

#include <logmono/logmono.hpp>

int main() {
  using namespace logmono;

  // The coding-gain function [2 sqrt(pi) Gamma(x + 1) / Gamma(x + 1/2)]^(1/x).
  const auto gain = families::FamilySpec::coding_gain();
  std::printf("coding gain at x = 2:        %.15g\n",
              families::evaluate(gain, 2.0));

  // Which side of the threshold does a parameter triple fall on?
  const auto cls = theorem::classify(1.0, 0.5, 2.0);
  std::printf("classify(1, 0.5, 2):         %s (threshold %.15g)\n",
              theorem::to_string(cls.side), cls.threshold);

  // Sign table of (-1)^k (ln f)^(k) over the default grid.
  const auto table = checker::lcm_sign_table(
      gain, checker::GridSpec::desk_default(), 6);
  std::printf("sign table verdict:          %s\n",
              table.verdict.consistent() ? "consistent" : "violation");

  // Series-extracted first derivative of ln f versus finite differences.
  const auto fd = checker::finite_difference_crosscheck(gain, 2.0, 1);
  std::printf("d/dx ln f at 2:              %.15g (fd agrees to %.2g)\n",
              fd.series_value, fd.rel_err);

  // A measure-backed Stieltjes transform is completely monotonic by
  // construction; demonstrate the inclusion into the log-side check.
  const families::MeasureRep measure(1.0, 0.5, {{1.0, 0.75}, {4.0, 0.25}});
  const auto inclusion = checker::inclusion_demo(
      measure, checker::GridSpec::desk_default(), 6);
  std::printf("stieltjes inclusion holds:   %s\n",
              inclusion.inclusion_holds ? "yes" : "no");
  return 0;
}
