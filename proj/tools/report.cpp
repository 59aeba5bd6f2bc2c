#include "report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <ostream>

namespace gtrs::cli {

namespace {
using json = nlohmann::ordered_json;

json outcome_json(const RunReport& report) {
  const GtrsOutcome& out = report.outcome;
  json doc;
  doc["source"] = report.source;
  doc["lambda_star"] = out.lambda_star;
  doc["q_star"] = out.best_objective;
  doc["case"] = to_string(out.case_kind);
  doc["success"] = out.success;
  doc["metric"] = out.metric;
  doc["kkt_stationarity"] = out.kkt.stationarity;
  doc["kkt_feasibility"] = out.kkt.feasibility;
  doc["kkt_complementarity"] = out.kkt.complementarity;
  doc["multiplier_in_interval"] = out.kkt.multiplier_in_interval;
  if (out.interval.lower_computed) doc["lambda_low"] = out.interval.lower;
  if (out.interval.upper_computed) doc["lambda_up"] = out.interval.upper;
  if (out.hard_case) {
    json hc;
    hc["endpoint"] = out.hard_case->endpoint;
    hc["range_consistent"] = out.hard_case->range_consistent;
    hc["range_residual"] = out.hard_case->range_residual;
    if (out.hard_case->range_consistent) {
      hc["p_star"] = out.hard_case->p_star;
      hc["g_particular"] = out.hard_case->g_particular;
      // The endpoint test that checks only g at the particular solution.
      const bool naive_verdict = out.hard_case->which == Endpoint::Lower
                                     ? out.hard_case->g_particular <= 0.0
                                     : out.hard_case->g_particular >= 0.0;
      hc["naive_test_would_misclassify"] = naive_verdict != out.hard_case->is_hard_case_2;
    }
    hc["is_hard_case_2"] = out.hard_case->is_hard_case_2;
    doc["hard_case"] = hc;
  }
  doc["secular_iterations"] = out.secular_iterations;
  std::int64_t cg_total = 0;
  for (const auto& entry : out.trace) cg_total += entry.cg_iterations;
  doc["cg_iterations_total"] = cg_total;
  doc["matvecs"] = out.matvecs;
  if (!out.notes.empty()) doc["notes"] = out.notes;
  doc["time_interval_s"] = out.times.interval_s;
  doc["time_hard_case_s"] = out.times.hard_case_s;
  doc["time_secular_s"] = out.times.secular_s;
  doc["time_refine_s"] = out.times.refine_s;
  doc["time_total_s"] = out.times.total_s;
  if (report.include_trace) {
    json trace = json::array();
    for (const auto& entry : out.trace) {
      trace.push_back({{"lambda", entry.lambda},
                       {"phi", entry.phi},
                       {"cg_iterations", entry.cg_iterations},
                       {"regularized", entry.regularized}});
    }
    doc["trace"] = trace;
  }
  return doc;
}

}  // namespace

void print_report(std::ostream& os, const RunReport& report) {
  const GtrsOutcome& out = report.outcome;
  os << std::setprecision(12);
  os << "  source              " << report.source << "\n";
  os << "  case                " << to_string(out.case_kind) << "\n";
  os << "  lambda_star         " << out.lambda_star << "\n";
  os << "  q_star              " << out.best_objective << "\n";
  os << "  kkt_stationarity    " << out.kkt.stationarity << "\n";
  os << "  kkt_feasibility     " << out.kkt.feasibility << "\n";
  os << "  kkt_complementarity " << out.kkt.complementarity << "\n";
  os << "  success             " << (out.success ? "yes" : "no") << "\n";
  if (out.interval.lower_computed) os << "  lambda_low          " << out.interval.lower << "\n";
  if (out.interval.upper_computed) os << "  lambda_up           " << out.interval.upper << "\n";
  if (out.hard_case && out.hard_case->range_consistent) {
    os << "  p_star              " << out.hard_case->p_star << "\n";
    os << "  g_particular        " << out.hard_case->g_particular << "\n";
  }
  os << "  secular_iterations  " << out.secular_iterations << "\n";
  os << "  matvecs             " << out.matvecs << "\n";
  os << "  time_total_s        " << out.times.total_s << "\n";
  if (!out.notes.empty()) os << "  notes               " << out.notes << "\n";
}

std::string report_json_string(const RunReport& report) {
  return outcome_json(report).dump(2) + "\n";
}

void write_report_json(const std::filesystem::path& path, const RunReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open report for writing");
  out << report_json_string(report);
}

}  // namespace gtrs::cli
