#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srcf/error.hpp"
#include "srcf/rules.hpp"

namespace srcf::cli {

enum class Command { kIntegralBench, kFilterBench, kRuleCheck };
enum class Format { kCsv, kJson };

std::string_view to_string(Command command);
std::string_view to_string(Format format);

/// Invalid or contradictory configuration. The message names the offending
/// option and what would be accepted.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct BenchConfig {
  Command command = Command::kIntegralBench;
  Index n = 6;
  int q = 2;
  int steps = 100;
  int runs = 1000;  // integral-bench runs, rule-check draws
  int n_mc = 500;
  std::vector<SchemeKind> schemes;
  std::map<SchemeKind, int> n_m;
  int mc_samples = 600;
  std::uint64_t seed = 1;
  std::optional<std::string> out;  // stdout when unset
  Format format = Format::kCsv;
  int workers = 1;

  /// Schemes with their repetition counts applied.
  std::vector<IntegrationScheme> scheme_list() const;
};

/// Defaults for one command: Table-1 settings for integral-bench, the growth
/// model settings for filter-bench.
BenchConfig default_config(Command command);

/// Parses `srcf <command> [options]`. Precedence is flags, then --config file
/// values, then SRCF_SEED (seed only), then command defaults. Throws
/// CLI::ParseError subclasses for syntax problems (including --help) and
/// ConfigError for values that are out of range or do not fit the command.
BenchConfig parse_config(const std::vector<std::string>& args);

/// Help text for the command line.
std::string usage();

}  // namespace srcf::cli
