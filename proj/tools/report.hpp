// Run reports: one human-readable block on stdout and an optional
// machine-readable JSON file with fixed field names. Timing fields all carry
// the time_ prefix so reports can be compared net of timings.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "gtrs/solver.hpp"

namespace gtrs::cli {

struct RunReport {
  std::string source;  ///< "solver" or "oracle"
  GtrsOutcome outcome;
  bool include_trace = false;
};

void print_report(std::ostream& out, const RunReport& report);
void write_report_json(const std::filesystem::path& path, const RunReport& report);
std::string report_json_string(const RunReport& report);

}  // namespace gtrs::cli
