#pragma once

#include <string>
#include <variant>
#include <vector>

#include "srcf/bench.hpp"
#include "srcf/cli/config.hpp"
#include "srcf/rule_check.hpp"

namespace srcf::cli {

struct RuleCheckReport {
  Index n = 0;
  int draws = 0;
  std::uint64_t seed = 0;
  std::vector<ExactnessReport> rows;
};

using Report = std::variant<IntegralBenchReport, FilterBenchReport, RuleCheckReport>;

/// Tool version written into every report.
std::string_view tool_version();

/// Floats are written with 10 significant digits, so a parsed report equals
/// the original up to that rounding, and re-emitting it is byte-identical.
std::string format_csv(const Report& report);
std::string format_json(const Report& report);
std::string format_report(const Report& report, Format format);

/// Inverse of format_json. Throws srcf::Error on malformed input.
Report parse_json_report(const std::string& text);

/// Writes the formatted report to config.out, or to stdout when unset.
/// Throws srcf::Error with the system message when the file cannot be written.
void emit_report(const Report& report, const BenchConfig& config);

}  // namespace srcf::cli
