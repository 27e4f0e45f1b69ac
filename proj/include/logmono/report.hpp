#pragma once

// Render check results for terminals, spreadsheets and machine consumers.
// CSV uses comma separators, LF line endings and 17-significant-digit
// numbers so that values round-trip through binary64 exactly; JSON uses
// insertion-ordered keys so repeated runs emit identical bytes.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "logmono/checker.hpp"
#include "logmono/families.hpp"
#include "logmono/theorem.hpp"

namespace logmono {
namespace report {

using Json = nlohmann::ordered_json;

enum class Format { Human, Csv, Json };

inline Format parse_format(const std::string& text) {
  if (text == "human") return Format::Human;
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw std::invalid_argument("format must be human, csv or json, got '" +
                              text + "'");
}

inline std::string format17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

inline Json grid_json(const checker::GridSpec& grid) {
  Json j;
  j["x_min"] = grid.x_min;
  j["x_max"] = grid.x_max;
  j["points"] = grid.points;
  j["spacing"] = checker::to_string(grid.spacing);
  return j;
}

inline Json verdict_json(const checker::Verdict& verdict) {
  Json j;
  j["consistent"] = verdict.consistent();
  j["max_order"] = verdict.max_order;
  j["tolerance_scale"] = verdict.tolerance_scale;
  if (verdict.violation) {
    Json v;
    v["k"] = verdict.violation->k;
    v["x"] = verdict.violation->x;
    v["value"] = verdict.violation->value;
    v["series_only_confirmation"] = verdict.violation->series_only;
    j["violation"] = v;
  }
  return j;
}

// ---- sign tables ----------------------------------------------------

inline std::string sign_table_csv(const checker::SignTable& table) {
  std::string out = "k,x,value,verdict\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const int k = table.k_min + static_cast<int>(r);
    for (std::size_t i = 0; i < table.xs.size(); ++i) {
      const bool is_violation =
          table.verdict.violation && table.verdict.violation->k == k &&
          table.verdict.violation->x == table.xs[i];
      out += std::to_string(k);
      out += ',';
      out += format17(table.xs[i]);
      out += ',';
      out += format17(table.rows[r][i]);
      out += ',';
      out += is_violation ? "violation" : "ok";
      out += '\n';
    }
  }
  return out;
}

inline Json sign_table_json(const checker::SignTable& table,
                            const std::string& subject) {
  Json j;
  j["subject"] = subject;
  j["mode"] = checker::to_string(table.mode);
  j["grid"] = grid_json(table.grid);
  j["max_order"] = table.max_order;
  j["tolerance_scale"] = checker::kToleranceScale;
  j["verdict"] = verdict_json(table.verdict);
  j["xs"] = table.xs;
  Json rows = Json::array();
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Json row;
    row["k"] = table.k_min + static_cast<int>(r);
    row["values"] = table.rows[r];
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

inline std::string sign_table_human(const checker::SignTable& table,
                                    const std::string& subject) {
  std::string out;
  out += std::string(checker::to_string(table.mode) == std::string("lcm")
                         ? "log-derivative sign check"
                         : "derivative sign check");
  out += " for " + subject + "\n";
  out += "  grid: [" + format17(table.grid.x_min) + ", " +
         format17(table.grid.x_max) + "], " + std::to_string(table.grid.points) +
         " points, " + checker::to_string(table.grid.spacing) + " spacing\n";
  out += "  orders: " + std::to_string(table.k_min) + ".." +
         std::to_string(table.max_order) + "\n";
  if (table.verdict.consistent()) {
    out += "  verdict: consistent up to order " +
           std::to_string(table.verdict.max_order) + " (tolerance scale " +
           format17(table.verdict.tolerance_scale) + ")\n";
  } else {
    const checker::ViolationInfo& v = *table.verdict.violation;
    out += "  verdict: VIOLATION at k=" + std::to_string(v.k) + ", x=" +
           format17(v.x) + ", value=" + format17(v.value) +
           (v.series_only ? " (series path only)\n"
                          : " (confirmed by closed form)\n");
  }
  return out;
}

// ---- classification --------------------------------------------------

inline std::string classification_csv(double a, double b, double c,
                                      const theorem::Classification& r) {
  std::string out = "a,b,c,region,threshold,margin\n";
  out += format17(a) + "," + format17(b) + "," + format17(c) + "," +
         theorem::to_string(r.side) + "," + format17(r.threshold) + "," +
         format17(r.margin) + "\n";
  return out;
}

inline Json classification_json(double a, double b, double c,
                                const theorem::Classification& r) {
  Json j;
  j["a"] = a;
  j["b"] = b;
  j["c"] = c;
  j["region"] = theorem::to_string(r.side);
  j["threshold"] = r.threshold;
  j["margin"] = r.margin;
  return j;
}

inline std::string classification_human(double a, double b, double c,
                                        const theorem::Classification& r) {
  std::string out;
  out += "parameters: a=" + format17(a) + ", b=" + format17(b) +
         ", c=" + format17(c) + "\n";
  out += "threshold:  " + format17(r.threshold) + "\n";
  out += "margin:     " + format17(r.margin) + "\n";
  switch (r.side) {
    case theorem::MonotoneSide::DirectLcm:
      out += "region:     lcm (h is logarithmically completely monotone)\n";
      break;
    case theorem::MonotoneSide::ReciprocalLcm:
      out += "region:     reciprocal-lcm (1/h is logarithmically completely "
             "monotone)\n";
      break;
    case theorem::MonotoneSide::Undetermined:
      out += "region:     undetermined (outside both sufficient regions)\n";
      break;
  }
  return out;
}

// ---- violation search --------------------------------------------------

inline std::string violation_csv(
    int k, const std::optional<theorem::ViolationPoint>& hit) {
  std::string out = "k,x,value,verdict\n";
  if (hit) {
    out += std::to_string(k) + "," + format17(hit->x) + "," +
           format17(hit->value) + ",violation\n";
  } else {
    out += std::to_string(k) + ",,,ok\n";
  }
  return out;
}

inline Json violation_json(double a, double b, double c, int k, double x_max,
                           const std::optional<theorem::ViolationPoint>& hit) {
  Json j;
  j["a"] = a;
  j["b"] = b;
  j["c"] = c;
  j["k"] = k;
  j["x_max"] = x_max;
  j["found"] = hit.has_value();
  if (hit) {
    j["x"] = hit->x;
    j["value"] = hit->value;
  }
  return j;
}

inline std::string violation_human(
    int k, double x_max, const std::optional<theorem::ViolationPoint>& hit) {
  if (hit) {
    return "violation at order k=" + std::to_string(k) + ": x=" +
           format17(hit->x) + ", signed log-derivative=" + format17(hit->value) +
           "\n";
  }
  return "no violation at order k=" + std::to_string(k) + " up to x_max=" +
         format17(x_max) + "\n";
}

// ---- sweeps --------------------------------------------------

inline std::string sweep_csv(const std::vector<checker::SweepRow>& rows) {
  std::string out = "param,verdict,k,x,value\n";
  for (const checker::SweepRow& row : rows) {
    out += format17(row.value);
    if (!row.verdict) {
      out += ",error,,,\n";
    } else if (row.verdict->consistent()) {
      out += ",consistent,,,\n";
    } else {
      const checker::ViolationInfo& v = *row.verdict->violation;
      out += ",violation," + std::to_string(v.k) + "," + format17(v.x) + "," +
             format17(v.value) + "\n";
    }
  }
  return out;
}

inline Json sweep_json(const std::string& subject, const std::string& parameter,
                       const checker::GridSpec& grid, int max_order,
                       const std::vector<checker::SweepRow>& rows) {
  Json j;
  j["subject"] = subject;
  j["parameter"] = parameter;
  j["grid"] = grid_json(grid);
  j["max_order"] = max_order;
  j["tolerance_scale"] = checker::kToleranceScale;
  Json out_rows = Json::array();
  for (const checker::SweepRow& row : rows) {
    Json r;
    r["param"] = row.value;
    if (!row.verdict) {
      r["outcome"] = "error";
      r["error"] = row.error;
    } else if (row.verdict->consistent()) {
      r["outcome"] = "consistent";
    } else {
      r["outcome"] = "violation";
      r["k"] = row.verdict->violation->k;
      r["x"] = row.verdict->violation->x;
      r["value"] = row.verdict->violation->value;
    }
    out_rows.push_back(r);
  }
  j["rows"] = out_rows;
  return j;
}

inline std::string sweep_human(const std::string& subject,
                               const std::string& parameter,
                               const std::vector<checker::SweepRow>& rows) {
  std::string out = "sweep of " + parameter + " for " + subject + "\n";
  for (const checker::SweepRow& row : rows) {
    out += "  " + parameter + "=" + format17(row.value) + ": ";
    if (!row.verdict) {
      out += "error (" + row.error + ")\n";
    } else if (row.verdict->consistent()) {
      out += "consistent\n";
    } else {
      const checker::ViolationInfo& v = *row.verdict->violation;
      out += "violation at k=" + std::to_string(v.k) + ", x=" + format17(v.x) +
             ", value=" + format17(v.value) + "\n";
    }
  }
  return out;
}

}  // namespace report
}  // namespace logmono
