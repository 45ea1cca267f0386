#include "srcf/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <string>

#include "srcf/log.hpp"

namespace srcf::cli {
namespace {

constexpr std::array<std::pair<Command, std::string_view>, 3> kCommands{{
    {Command::kIntegralBench, "integral-bench"},
    {Command::kFilterBench, "filter-bench"},
    {Command::kRuleCheck, "rule-check"},
}};

struct RawOptions {
  std::string command;
  std::optional<long long> n;
  std::optional<int> q;
  std::optional<int> steps;
  std::optional<int> runs;
  std::optional<int> n_mc;
  std::vector<std::string> schemes;
  std::vector<std::string> n_m;
  std::optional<int> mc_samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> workers;
};

void build_app(CLI::App& app, RawOptions& raw) {
  app.description("Gaussian-integral and filtering benchmarks for spherical-radial integration rules");
  std::vector<std::string> names;
  for (const auto& [cmd, name] : kCommands) names.emplace_back(name);
  app.add_option("command", raw.command, "integral-bench | filter-bench | rule-check")
      ->required()
      ->check(CLI::IsMember(names));
  app.add_option("--n", raw.n, "state dimension");
  app.add_option("--q", raw.q, "growth-model exponent (filter-bench)");
  app.add_option("--steps", raw.steps, "time steps per trajectory (filter-bench)");
  app.add_option("--runs", raw.runs, "independent runs (integral-bench) or rule draws (rule-check)");
  app.add_option("--nmc", raw.n_mc, "Monte-Carlo trajectories (filter-bench)");
  app.add_option("--schemes", raw.schemes, "comma-separated subset of ckf3,ckf5,sif3,sif5,qsif5,mc")
      ->delimiter(',');
  app.add_option("--nm", raw.n_m, "repetitions per estimate, as <scheme>=<int>; repeatable")
      ->delimiter(',');
  app.add_option("--mc-samples", raw.mc_samples, "samples per Monte-Carlo estimate");
  app.add_option("--seed", raw.seed, "master seed")->envname("SRCF_SEED");
  app.add_option("--out", raw.out, "output file (default: stdout)");
  app.add_option("--format", raw.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--workers", raw.workers, "worker threads");
  app.set_config("--config", "", "key = value file mirroring the long options");
  app.allow_config_extras(CLI::config_extras_mode::error);
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, text] : kCommands) {
    if (text == name) return cmd;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

SchemeKind parse_scheme(const std::string& name, std::string_view option) {
  if (auto kind = parse_scheme_kind(name)) return *kind;
  throw ConfigError(std::string(option) + ": unknown scheme '" + name +
                    "'; expected one of ckf3, ckf5, sif3, sif5, qsif5, mc");
}

void require_at_least(std::string_view option, long long value, long long minimum) {
  if (value < minimum) {
    throw ConfigError(std::string(option) + " must be >= " + std::to_string(minimum) + ", got " +
                      std::to_string(value));
  }
}

void reject_for(const char* option, bool given, Command command) {
  if (given) {
    throw ConfigError(std::string(option) + " does not apply to " + std::string(to_string(command)));
  }
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == command) return name;
  }
  return "?";
}

std::string_view to_string(Format format) { return format == Format::kCsv ? "csv" : "json"; }

std::vector<IntegrationScheme> BenchConfig::scheme_list() const {
  std::vector<IntegrationScheme> list;
  for (SchemeKind kind : schemes) {
    IntegrationScheme s{kind, 1, 0};
    if (auto it = n_m.find(kind); it != n_m.end()) s.repetitions = it->second;
    if (kind == SchemeKind::kMc) s.mc_samples = mc_samples;
    if (s.deterministic()) s.repetitions = 1;
    list.push_back(s);
  }
  return list;
}

BenchConfig default_config(Command command) {
  BenchConfig c;
  c.command = command;
  c.n_m = {{SchemeKind::kSif3, 50}, {SchemeKind::kSif5, 10}, {SchemeKind::kQsif5, 10}, {SchemeKind::kMc, 1}};
  switch (command) {
    case Command::kIntegralBench:
      c.n = 6;
      c.runs = 1000;
      c.schemes = {SchemeKind::kCkf3, SchemeKind::kCkf5, SchemeKind::kSif3,
                   SchemeKind::kSif5, SchemeKind::kQsif5, SchemeKind::kMc};
      break;
    case Command::kFilterBench:
      c.n = 10;
      c.q = 2;
      c.n_mc = 500;
      c.steps = 100;
      c.schemes = {SchemeKind::kCkf3, SchemeKind::kCkf5, SchemeKind::kSif3, SchemeKind::kSif5,
                   SchemeKind::kQsif5};
      break;
    case Command::kRuleCheck:
      c.n = 4;
      c.runs = 100;
      c.schemes = {SchemeKind::kCkf3, SchemeKind::kCkf5, SchemeKind::kSif3, SchemeKind::kSif5,
                   SchemeKind::kQsif5};
      break;
  }
  return c;
}

std::string usage() {
  CLI::App app{"", "srcf"};
  RawOptions raw;
  build_app(app, raw);
  return app.help();
}

BenchConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"", "srcf"};
  RawOptions raw;
  build_app(app, raw);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);

  const Command command = parse_command(raw.command);
  BenchConfig c = default_config(command);

  if (command == Command::kIntegralBench) {
    reject_for("--q", raw.q.has_value(), command);
    reject_for("--steps", raw.steps.has_value(), command);
    reject_for("--nmc", raw.n_mc.has_value(), command);
  } else if (command == Command::kFilterBench) {
    reject_for("--runs", raw.runs.has_value(), command);
  } else {
    reject_for("--q", raw.q.has_value(), command);
    reject_for("--steps", raw.steps.has_value(), command);
    reject_for("--nmc", raw.n_mc.has_value(), command);
    reject_for("--nm", !raw.n_m.empty(), command);
  }

  if (raw.n) {
    require_at_least("--n", *raw.n, 1);
    c.n = static_cast<Index>(*raw.n);
  }
  if (raw.q) {
    require_at_least("--q", *raw.q, 1);
    c.q = *raw.q;
  }
  if (raw.steps) {
    require_at_least("--steps", *raw.steps, 1);
    c.steps = *raw.steps;
  }
  if (raw.runs) {
    require_at_least("--runs", *raw.runs, 1);
    c.runs = *raw.runs;
  }
  if (raw.n_mc) {
    require_at_least("--nmc", *raw.n_mc, 1);
    c.n_mc = *raw.n_mc;
  }
  if (raw.mc_samples) {
    require_at_least("--mc-samples", *raw.mc_samples, 1);
    c.mc_samples = *raw.mc_samples;
  }
  if (raw.workers) {
    require_at_least("--workers", *raw.workers, 1);
    c.workers = *raw.workers;
  }
  if (raw.seed) c.seed = *raw.seed;
  if (raw.out) {
    if (raw.out->empty()) throw ConfigError("--out: empty path");
    c.out = raw.out;
  }
  if (raw.format) c.format = *raw.format == "json" ? Format::kJson : Format::kCsv;

  if (!raw.schemes.empty()) {
    c.schemes.clear();
    for (const auto& name : raw.schemes) {
      const SchemeKind kind = parse_scheme(name, "--schemes");
      if (std::find(c.schemes.begin(), c.schemes.end(), kind) != c.schemes.end()) {
        throw ConfigError("--schemes: '" + name + "' listed twice");
      }
      c.schemes.push_back(kind);
    }
  }
  const auto selected = [&](SchemeKind kind) {
    return std::find(c.schemes.begin(), c.schemes.end(), kind) != c.schemes.end();
  };

  for (const auto& entry : raw.n_m) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--nm: expected <scheme>=<int>, got '" + entry + "'");
    }
    const std::string name = entry.substr(0, eq);
    const std::string value = entry.substr(eq + 1);
    const SchemeKind kind = parse_scheme(name, "--nm");
    int reps = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), reps);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ConfigError("--nm " + name + ": '" + value + "' is not an integer");
    }
    require_at_least("--nm " + name, reps, 1);
    if (!selected(kind)) {
      throw ConfigError("--nm " + name + " given but " + name + " is not in --schemes");
    }
    if (IntegrationScheme{kind, reps, 0}.deterministic() && reps != 1) {
      warn("--nm " + name + "=" + value + ": deterministic rule, using 1 repetition");
      reps = 1;
    }
    c.n_m[kind] = reps;
  }
  if (raw.mc_samples && !selected(SchemeKind::kMc)) {
    throw ConfigError("--mc-samples given but mc is not in --schemes");
  }

  for (const auto& s : c.scheme_list()) {
    if (c.n < s.min_dimension()) {
      throw ConfigError("scheme " + std::string(srcf::to_string(s.kind)) + " needs --n >= " +
                        std::to_string(s.min_dimension()) + ", got " + std::to_string(c.n));
    }
    s.validate(c.n);
  }
  return c;
}

}  // namespace srcf::cli
