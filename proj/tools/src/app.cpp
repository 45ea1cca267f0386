#include "srcf/cli/app.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "srcf/log.hpp"

namespace srcf::cli {
namespace {

RuleCheckReport run_rule_check(const BenchConfig& config) {
  RuleCheckReport report;
  report.n = config.n;
  report.draws = config.runs;
  report.seed = config.seed;
  const RngStream root = RngStream(config.seed).substream(4);
  for (const auto& scheme : config.scheme_list()) {
    RngStream rng = root.substream(static_cast<std::uint64_t>(scheme.kind));
    report.rows.push_back(rule_check(config.n, scheme, config.runs, rng));
  }
  return report;
}

void report_reference_mismatches(const IntegralBenchReport& report) {
  for (const auto& row : report.rows) {
    if (!row.reference_re_mean_pct || row.matches_reference) continue;
    std::ostringstream msg;
    msg.precision(10);
    msg << to_string(row.scheme.kind) << ": mean relative error " << row.re_mean_pct
        << "% differs from the published " << *row.reference_re_mean_pct << '%';
    warn(msg.str());
  }
}

}  // namespace

Report run_benchmark(const BenchConfig& config) {
  const std::vector<IntegrationScheme> schemes = config.scheme_list();
  switch (config.command) {
    case Command::kIntegralBench: {
      IntegralBenchReport r =
          run_integral_bench(config.n, schemes, config.runs, RngStream(config.seed), config.workers);
      report_reference_mismatches(r);
      return r;
    }
    case Command::kFilterBench: {
      GrowthModel growth;
      growth.n = config.n;
      growth.q = config.q;
      return run_filter_bench(growth, schemes, config.n_mc, config.steps, RngStream(config.seed),
                              config.workers);
    }
    case Command::kRuleCheck:
      return run_rule_check(config);
  }
  throw Error("unknown command");
}

bool fully_diverged(const Report& report) {
  const auto* filter = std::get_if<FilterBenchReport>(&report);
  if (!filter) return false;
  for (const auto& s : filter->series) {
    if (s.runs_used == 0) return true;
  }
  return false;
}

int run(const std::vector<std::string>& args, std::ostream& err) {
  BenchConfig config;
  try {
    config = parse_config(args);
  } catch (const CLI::CallForHelp&) {
    std::cout << usage();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "srcf: " << e.what() << "\nRun 'srcf --help' for usage.\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "srcf: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "srcf: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const Report report = run_benchmark(config);
    emit_report(report, config);
    if (fully_diverged(report)) {
      err << "srcf: at least one scheme diverged on every run\n";
      return kExitDiverged;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "srcf: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace srcf::cli
