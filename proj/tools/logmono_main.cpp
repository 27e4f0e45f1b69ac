// Command-line front end for the complete-monotonicity toolkit.
//
// Exit codes: 0 when the requested check is consistent (or the command
// simply succeeded), 1 when a monotonicity violation was located, 2 for
// usage, parse and domain errors.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "logmono/logmono.hpp"
#include "logmono/report.hpp"

namespace {

using logmono::checker::CheckMode;
using logmono::checker::GridSpec;
using logmono::checker::Spacing;
using logmono::families::FamilySpec;
using logmono::families::MeasureRep;
using logmono::report::Format;

constexpr int kExitConsistent = 0;
constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

// The only environment influence: LOGMONO_OUT_DIR supplies the default
// directory for relative --out paths.
void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::filesystem::path path(out_path);
  if (path.is_relative()) {
    if (const char* dir = std::getenv("LOGMONO_OUT_DIR")) {
      path = std::filesystem::path(dir) / path;
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file " + path.string());
  }
  out << payload;
}

struct GridOptions {
  double x_min = 0.01;
  double x_max = 100.0;
  int points = 200;
  std::string spacing = "log";

  GridSpec build() const {
    if (spacing != "log" && spacing != "linear") {
      throw std::invalid_argument("spacing must be 'log' or 'linear'");
    }
    return GridSpec(x_min, x_max, points,
                    spacing == "log" ? Spacing::Log : Spacing::Linear);
  }
};

void add_grid_options(CLI::App* cmd, GridOptions* grid) {
  cmd->add_option("--x-min", grid->x_min, "Lower grid endpoint")
      ->capture_default_str();
  cmd->add_option("--x-max", grid->x_max, "Upper grid endpoint")
      ->capture_default_str();
  cmd->add_option("--points", grid->points, "Number of grid points")
      ->capture_default_str();
  cmd->add_option("--spacing", grid->spacing, "Grid spacing: log or linear")
      ->capture_default_str();
}

double parse_real_option(const std::string& text, const std::string& what) {
  return logmono::detail::parse_real_token(text, what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Complete-monotonicity checks for gamma-ratio function families"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  std::string format_text = "human";
  std::string out_path;
  app.add_option("--format", format_text, "Output format: human, csv, json")
      ->capture_default_str();
  app.add_option("--out", out_path,
                 "Write output to this file instead of stdout (relative "
                 "paths resolve against LOGMONO_OUT_DIR)");

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand(
      "eval", "Evaluate a family member at a point");
  std::string eval_family;
  double eval_x = 1.0;
  eval_cmd->add_option("family", eval_family, "Canonical family text")
      ->required();
  eval_cmd->add_option("--x", eval_x, "Evaluation point")->required();

  // ---- classify ----
  auto* classify_cmd = app.add_subcommand(
      "classify", "Classify gamma-ratio parameters against the threshold");
  std::string cls_a, cls_b, cls_c;
  classify_cmd->add_option("--a", cls_a, "Numerator shift")->required();
  classify_cmd->add_option("--b", cls_b, "Denominator shift")->required();
  classify_cmd->add_option("--c", cls_c, "Prefactor (accepts 2sqrtpi, sqrtpi)")
      ->required();

  // ---- check ----
  auto* check_cmd = app.add_subcommand(
      "check", "Run a sign table over a grid for a family or measure");
  std::string check_subject;
  GridOptions check_grid;
  int check_order = 10;
  std::string check_mode = "lcm";
  check_cmd
      ->add_option("subject", check_subject,
                   "Family text, or stieltjes:a=..,b=..,atoms=s:w;..")
      ->required();
  add_grid_options(check_cmd, &check_grid);
  check_cmd->add_option("--order", check_order, "Highest derivative order")
      ->capture_default_str();
  check_cmd->add_option("--mode", check_mode, "Check mode: lcm or cm")
      ->capture_default_str();

  // ---- find-violation ----
  auto* find_cmd = app.add_subcommand(
      "find-violation",
      "Scan the signed log-derivative of a gamma-ratio member for a sign "
      "failure");
  std::string fv_a, fv_b, fv_c;
  int fv_k = 1;
  double fv_x_max = 100.0;
  find_cmd->add_option("--a", fv_a, "Numerator shift")->required();
  find_cmd->add_option("--b", fv_b, "Denominator shift")->required();
  find_cmd->add_option("--c", fv_c, "Prefactor (accepts 2sqrtpi, sqrtpi)")
      ->required();
  find_cmd->add_option("--k", fv_k, "Derivative order")->required();
  find_cmd->add_option("--x-max", fv_x_max, "Upper end of the scan")
      ->capture_default_str();

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Re-run the LCM check across a range of one parameter");
  std::string sweep_family, sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
  GridOptions sweep_grid;
  int sweep_order = 10;
  sweep_cmd->add_option("family", sweep_family, "Canonical family text")
      ->required();
  sweep_cmd->add_option("--param", sweep_param, "Parameter name to sweep")
      ->required();
  sweep_cmd->add_option("--from", sweep_from, "First parameter value")
      ->required();
  sweep_cmd->add_option("--to", sweep_to, "Last parameter value")->required();
  sweep_cmd->add_option("--step", sweep_step, "Increment between values")
      ->required();
  add_grid_options(sweep_cmd, &sweep_grid);
  sweep_cmd->add_option("--order", sweep_order, "Highest derivative order")
      ->capture_default_str();

  // ---- oracle ----
  auto* oracle_cmd = app.add_subcommand(
      "oracle", "Evaluate the independent cross-check paths");
  auto* oracle_psi = oracle_cmd->add_subcommand(
      "polygamma", "Integral-representation polygamma");
  int op_n = 1;
  double op_x = 1.0;
  oracle_psi->add_option("--n", op_n, "Derivative order (1..15)")->required();
  oracle_psi->add_option("--x", op_x, "Argument")->required();
  auto* oracle_gamma =
      oracle_cmd->add_subcommand("gamma", "Integral-representation gamma");
  double og_x = 1.0;
  oracle_gamma->add_option("--x", og_x, "Argument in (0, 50]")->required();
  auto* oracle_fd = oracle_cmd->add_subcommand(
      "finite-difference",
      "Richardson finite-difference derivative of ln f against the series");
  std::string ofd_family;
  double ofd_x = 1.0;
  int ofd_k = 1;
  oracle_fd->add_option("family", ofd_family, "Canonical family text")
      ->required();
  oracle_fd->add_option("--x", ofd_x, "Evaluation point")->required();
  oracle_fd->add_option("--k", ofd_k, "Derivative order (1..4)")->required();
  oracle_cmd->require_subcommand(1);

  // Let --format / --out appear after the subcommand as well as before it.
  for (CLI::App* sub : {eval_cmd, classify_cmd, check_cmd, find_cmd, sweep_cmd,
                        oracle_cmd, oracle_psi, oracle_gamma, oracle_fd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    const Format format = logmono::report::parse_format(format_text);

    if (*eval_cmd) {
      const FamilySpec spec = FamilySpec::parse(eval_family);
      const double value = logmono::families::evaluate(spec, eval_x);
      std::string payload;
      if (format == Format::Human) {
        payload = spec.text() + " at x=" + logmono::report::format17(eval_x) +
                  ": " + logmono::report::format17(value) + "\n";
      } else if (format == Format::Csv) {
        payload = "x,value\n" + logmono::report::format17(eval_x) + "," +
                  logmono::report::format17(value) + "\n";
      } else {
        logmono::report::Json j;
        j["family"] = spec.text();
        j["x"] = eval_x;
        j["value"] = value;
        payload = j.dump(2) + "\n";
      }
      write_output(out_path, payload);
      return kExitConsistent;
    }

    if (*classify_cmd) {
      const double a = parse_real_option(cls_a, "classify a");
      const double b = parse_real_option(cls_b, "classify b");
      const double c = parse_real_option(cls_c, "classify c");
      const logmono::theorem::Classification result =
          logmono::theorem::classify(a, b, c);
      std::string payload;
      if (format == Format::Human) {
        payload = logmono::report::classification_human(a, b, c, result);
      } else if (format == Format::Csv) {
        payload = logmono::report::classification_csv(a, b, c, result);
      } else {
        payload = logmono::report::classification_json(a, b, c, result).dump(2) +
                  "\n";
      }
      write_output(out_path, payload);
      return kExitConsistent;
    }

    if (*check_cmd) {
      const GridSpec grid = check_grid.build();
      CheckMode mode;
      if (check_mode == "lcm") {
        mode = CheckMode::Lcm;
      } else if (check_mode == "cm") {
        mode = CheckMode::Cm;
      } else {
        throw std::invalid_argument("mode must be 'lcm' or 'cm'");
      }

      logmono::checker::SignTable table = [&] {
        if (check_subject.rfind("stieltjes:", 0) == 0) {
          const MeasureRep measure = MeasureRep::parse(check_subject);
          return mode == CheckMode::Lcm
                     ? logmono::checker::lcm_sign_table(measure, grid,
                                                        check_order)
                     : logmono::checker::cm_sign_table(measure, grid,
                                                       check_order);
        }
        const FamilySpec spec = FamilySpec::parse(check_subject);
        return mode == CheckMode::Lcm
                   ? logmono::checker::lcm_sign_table(spec, grid, check_order)
                   : logmono::checker::cm_sign_table(spec, grid, check_order);
      }();

      std::string payload;
      if (format == Format::Human) {
        payload = logmono::report::sign_table_human(table, check_subject);
      } else if (format == Format::Csv) {
        payload = logmono::report::sign_table_csv(table);
      } else {
        payload =
            logmono::report::sign_table_json(table, check_subject).dump(2) +
            "\n";
      }
      write_output(out_path, payload);
      return table.verdict.consistent() ? kExitConsistent : kExitViolation;
    }

    if (*find_cmd) {
      const double a = parse_real_option(fv_a, "find-violation a");
      const double b = parse_real_option(fv_b, "find-violation b");
      const double c = parse_real_option(fv_c, "find-violation c");
      const std::optional<logmono::theorem::ViolationPoint> hit =
          logmono::theorem::find_violation(a, b, c, fv_k, fv_x_max);
      std::string payload;
      if (format == Format::Human) {
        payload = logmono::report::violation_human(fv_k, fv_x_max, hit);
      } else if (format == Format::Csv) {
        payload = logmono::report::violation_csv(fv_k, hit);
      } else {
        payload =
            logmono::report::violation_json(a, b, c, fv_k, fv_x_max, hit)
                .dump(2) +
            "\n";
      }
      write_output(out_path, payload);
      return hit ? kExitViolation : kExitConsistent;
    }

    if (*sweep_cmd) {
      if (!(sweep_step > 0.0) || !(sweep_to >= sweep_from)) {
        throw std::invalid_argument(
            "sweep: require from <= to and a positive step");
      }
      const double span = (sweep_to - sweep_from) / sweep_step;
      const int count = static_cast<int>(std::floor(span + 1e-9)) + 1;
      if (count < 1 || count > 10000) {
        throw std::invalid_argument(
            "sweep: range produces an unsupported sample count");
      }
      std::vector<double> values(static_cast<std::size_t>(count));
      for (int i = 0; i < count; ++i) {
        values[static_cast<std::size_t>(i)] =
            sweep_from + sweep_step * static_cast<double>(i);
      }

      const FamilySpec base = FamilySpec::parse(sweep_family);
      const GridSpec grid = sweep_grid.build();
      const std::vector<logmono::checker::SweepRow> rows =
          logmono::checker::sweep(base, sweep_param, values, grid, sweep_order);

      std::string payload;
      if (format == Format::Human) {
        payload = logmono::report::sweep_human(base.text(), sweep_param, rows);
      } else if (format == Format::Csv) {
        payload = logmono::report::sweep_csv(rows);
      } else {
        payload = logmono::report::sweep_json(base.text(), sweep_param, grid,
                                              sweep_order, rows)
                      .dump(2) +
                  "\n";
      }
      write_output(out_path, payload);

      bool any_violation = false;
      bool all_errors = true;
      for (const auto& row : rows) {
        if (row.verdict) {
          all_errors = false;
          if (!row.verdict->consistent()) any_violation = true;
        }
      }
      if (any_violation) return kExitViolation;
      if (all_errors) return kExitError;
      return kExitConsistent;
    }

    if (*oracle_cmd) {
      std::string payload;
      if (*oracle_psi) {
        const double value = logmono::specfun::polygamma_quadrature(op_n, op_x);
        const double primary = logmono::specfun::polygamma(op_n, op_x);
        if (format == Format::Csv) {
          payload = "n,x,quadrature,series\n" + std::to_string(op_n) + "," +
                    logmono::report::format17(op_x) + "," +
                    logmono::report::format17(value) + "," +
                    logmono::report::format17(primary) + "\n";
        } else if (format == Format::Json) {
          logmono::report::Json j;
          j["n"] = op_n;
          j["x"] = op_x;
          j["quadrature"] = value;
          j["series"] = primary;
          payload = j.dump(2) + "\n";
        } else {
          payload = "quadrature: " + logmono::report::format17(value) +
                    "\nseries:     " + logmono::report::format17(primary) + "\n";
        }
      } else if (*oracle_gamma) {
        const double value = logmono::specfun::gamma_quadrature(og_x);
        const double primary = std::exp(logmono::specfun::ln_gamma(og_x));
        if (format == Format::Csv) {
          payload = "x,quadrature,series\n" + logmono::report::format17(og_x) +
                    "," + logmono::report::format17(value) + "," +
                    logmono::report::format17(primary) + "\n";
        } else if (format == Format::Json) {
          logmono::report::Json j;
          j["x"] = og_x;
          j["quadrature"] = value;
          j["series"] = primary;
          payload = j.dump(2) + "\n";
        } else {
          payload = "quadrature: " + logmono::report::format17(value) +
                    "\nseries:     " + logmono::report::format17(primary) + "\n";
        }
      } else {
        const FamilySpec spec = FamilySpec::parse(ofd_family);
        const logmono::checker::FdCrossCheck result =
            logmono::checker::finite_difference_crosscheck(spec, ofd_x, ofd_k);
        if (format == Format::Csv) {
          payload = "x,k,series,finite_difference,rel_err\n" +
                    logmono::report::format17(ofd_x) + "," +
                    std::to_string(ofd_k) + "," +
                    logmono::report::format17(result.series_value) + "," +
                    logmono::report::format17(result.fd_value) + "," +
                    logmono::report::format17(result.rel_err) + "\n";
        } else if (format == Format::Json) {
          logmono::report::Json j;
          j["family"] = spec.text();
          j["x"] = ofd_x;
          j["k"] = ofd_k;
          j["series"] = result.series_value;
          j["finite_difference"] = result.fd_value;
          j["rel_err"] = result.rel_err;
          payload = j.dump(2) + "\n";
        } else {
          payload = "series:            " +
                    logmono::report::format17(result.series_value) +
                    "\nfinite difference: " +
                    logmono::report::format17(result.fd_value) +
                    "\nrelative error:    " +
                    logmono::report::format17(result.rel_err) + "\n";
        }
      }
      write_output(out_path, payload);
      return kExitConsistent;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  std::cerr << "error: no subcommand selected\n";
  return kExitError;
}
