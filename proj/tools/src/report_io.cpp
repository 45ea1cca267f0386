#include "srcf/cli/report_io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace srcf::cli {
namespace {

using Json = nlohmann::ordered_json;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

std::string fmt10(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt10(v).c_str(), nullptr);
}

double get_num(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string variant(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kCkf3:
      return "2n-point third-degree cubature";
    case SchemeKind::kCkf5:
      return "simplex fifth-degree rule, radii {0, sqrt(n+2)}, no rotation";
    case SchemeKind::kSif3:
      return "third-degree stochastic rule, radius chi(n+2), Haar rotation";
    case SchemeKind::kSif5:
      return "fifth-degree stochastic rule, radii from chi(2n+7) and beta(n+2, 3/2), Haar rotation";
    case SchemeKind::kQsif5:
      return "simplex fifth-degree rule, radii {0, sqrt(n+2)}, Haar rotation";
    case SchemeKind::kMc:
      return "plain Monte-Carlo";
  }
  return "";
}

Json scheme_meta(const IntegrationScheme& s, Index n) {
  Json j;
  j["scheme"] = std::string(to_string(s.kind));
  j["variant"] = variant(s.kind);
  j["n_m"] = s.repetitions;
  if (s.kind == SchemeKind::kMc) j["mc_samples"] = s.mc_samples;
  j["points"] = evaluations_per_estimate(s, n);
  return j;
}

IntegrationScheme scheme_from(const Json& meta) {
  const auto kind = parse_scheme_kind(meta.at("scheme").get<std::string>());
  if (!kind) throw Error("report: unknown scheme " + meta.at("scheme").dump());
  IntegrationScheme s{*kind, meta.at("n_m").get<int>(), 0};
  if (meta.contains("mc_samples")) s.mc_samples = meta.at("mc_samples").get<int>();
  return s;
}

Json header(std::string_view command, std::uint64_t seed) {
  Json meta;
  meta["tool"] = "srcf";
  meta["version"] = std::string(tool_version());
  meta["command"] = std::string(command);
  meta["seed"] = seed;
  return meta;
}

Json to_json(const IntegralBenchReport& r) {
  Json meta = header("integral-bench", r.seed);
  meta["n"] = r.n;
  meta["runs"] = r.runs;
  meta["integrand"] = r.integrand;
  meta["truth"] = num(r.truth);
  Json schemes = Json::array();
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json s = scheme_meta(row.scheme, r.n);
    s["points"] = row.points;
    s["symmetric_nodes"] = row.symmetric_nodes;
    s["reference_re_mean_pct"] = row.reference_re_mean_pct ? num(*row.reference_re_mean_pct) : Json(nullptr);
    s["matches_reference"] = row.matches_reference;
    schemes.push_back(std::move(s));
    Json out;
    out["scheme"] = std::string(to_string(row.scheme.kind));
    out["re_max_pct"] = num(row.re_max_pct);
    out["re_mean_pct"] = num(row.re_mean_pct);
    out["n_m"] = row.n_m;
    out["points"] = row.points;
    rows.push_back(std::move(out));
  }
  meta["schemes"] = std::move(schemes);
  return Json{{"meta", std::move(meta)}, {"rows", std::move(rows)}};
}

double steady_rmse(const RmseSeries& s) {
  double sum = 0.0;
  int used = 0;
  for (double v : s.run_steady_mse) {
    if (std::isnan(v)) continue;
    sum += v;
    ++used;
  }
  return used ? std::sqrt(sum / used) : std::numeric_limits<double>::quiet_NaN();
}

Json to_json(const FilterBenchReport& r) {
  Json meta = header("filter-bench", r.seed);
  meta["model"] = r.model;
  meta["n"] = r.n;
  meta["q"] = r.q;
  meta["steps"] = r.steps;
  meta["n_mc"] = r.n_mc;
  meta["steady_from"] = r.steady_from;
  meta["trajectory_resamples"] = r.trajectory_resamples;
  Json schemes = Json::array();
  Json rows = Json::array();
  for (const auto& s : r.series) {
    Json m = scheme_meta(s.scheme, r.n);
    m["runs_used"] = s.runs_used;
    m["excluded"] = s.excluded;
    m["steady_rmse"] = num(steady_rmse(s));
    Json runs = Json::array();
    for (double v : s.run_steady_mse) runs.push_back(num(v));
    m["run_steady_mse"] = std::move(runs);
    schemes.push_back(std::move(m));
    for (std::size_t k = 0; k < s.rmse.size(); ++k) {
      rows.push_back(Json{{"scheme", std::string(to_string(s.scheme.kind))},
                          {"k", k + 1},
                          {"rmse", num(s.rmse[k])}});
    }
  }
  meta["schemes"] = std::move(schemes);
  return Json{{"meta", std::move(meta)}, {"rows", std::move(rows)}};
}

Json to_json(const RuleCheckReport& r) {
  Json meta = header("rule-check", r.seed);
  meta["n"] = r.n;
  meta["draws"] = r.draws;
  Json rows = Json::array();
  for (const auto& e : r.rows) {
    Json out;
    out["scheme"] = std::string(to_string(e.kind));
    out["n"] = e.dimension;
    out["degree"] = e.degree;
    out["draws"] = e.draws;
    out["monomials_checked"] = e.monomials_checked;
    out["max_deviation"] = num(e.max_deviation);
    out["next_degree_deviation"] = num(e.next_degree_deviation);
    out["next_degree_inexact"] = e.next_degree_inexact;
    rows.push_back(std::move(out));
  }
  return Json{{"meta", std::move(meta)}, {"rows", std::move(rows)}};
}

Json to_json(const Report& report) {
  return std::visit([](const auto& r) { return to_json(r); }, report);
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "nan";
  if (v.is_number_float()) return fmt10(v.get<double>());
  return v.dump();
}

// Metadata goes into leading '#' lines; per-run arrays are left to JSON.
void write_csv_meta(std::ostream& os, const Json& meta) {
  for (const auto& [key, value] : meta.items()) {
    if (key == "schemes") continue;
    os << "# " << key << ": " << scalar_text(value) << '\n';
  }
  if (!meta.contains("schemes")) return;
  for (const auto& s : meta.at("schemes")) {
    os << "# scheme " << s.at("scheme").get<std::string>() << ':';
    bool first = true;
    for (const auto& [key, value] : s.items()) {
      if (key == "scheme" || value.is_array()) continue;
      os << (first ? " " : "; ") << key << '=' << scalar_text(value);
      first = false;
    }
    os << '\n';
  }
}

void write_csv_rows(std::ostream& os, const Json& rows, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << scalar_text(row.at(columns[i]));
    os << '\n';
  }
}

IntegralBenchReport integral_from(const Json& j) {
  const Json& meta = j.at("meta");
  IntegralBenchReport r;
  r.n = meta.at("n").get<Index>();
  r.runs = meta.at("runs").get<int>();
  r.seed = meta.at("seed").get<std::uint64_t>();
  r.integrand = meta.at("integrand").get<std::string>();
  r.truth = get_num(meta.at("truth"));
  const Json& schemes = meta.at("schemes");
  const Json& rows = j.at("rows");
  if (schemes.size() != rows.size()) throw Error("report: meta.schemes and rows differ in length");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    IntegralBenchRow row;
    row.scheme = scheme_from(schemes[i]);
    row.re_max_pct = get_num(rows[i].at("re_max_pct"));
    row.re_mean_pct = get_num(rows[i].at("re_mean_pct"));
    row.n_m = rows[i].at("n_m").get<int>();
    row.points = rows[i].at("points").get<std::size_t>();
    row.symmetric_nodes = schemes[i].at("symmetric_nodes").get<std::size_t>();
    const Json& ref = schemes[i].at("reference_re_mean_pct");
    if (!ref.is_null()) row.reference_re_mean_pct = ref.get<double>();
    row.matches_reference = schemes[i].at("matches_reference").get<bool>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

FilterBenchReport filter_from(const Json& j) {
  const Json& meta = j.at("meta");
  FilterBenchReport r;
  r.model = meta.at("model").get<std::string>();
  r.n = meta.at("n").get<Index>();
  r.q = meta.at("q").get<int>();
  r.steps = meta.at("steps").get<int>();
  r.n_mc = meta.at("n_mc").get<int>();
  r.steady_from = meta.at("steady_from").get<int>();
  r.seed = meta.at("seed").get<std::uint64_t>();
  r.trajectory_resamples = meta.at("trajectory_resamples").get<int>();
  for (const auto& m : meta.at("schemes")) {
    RmseSeries s;
    s.scheme = scheme_from(m);
    s.runs_used = m.at("runs_used").get<int>();
    s.excluded = m.at("excluded").get<int>();
    for (const auto& v : m.at("run_steady_mse")) s.run_steady_mse.push_back(get_num(v));
    r.series.push_back(std::move(s));
  }
  for (const auto& row : j.at("rows")) {
    const std::string name = row.at("scheme").get<std::string>();
    auto it = std::find_if(r.series.begin(), r.series.end(),
                           [&](const RmseSeries& s) { return to_string(s.scheme.kind) == name; });
    if (it == r.series.end()) throw Error("report: row for unlisted scheme " + name);
    const auto k = row.at("k").get<std::size_t>();
    if (k != it->rmse.size() + 1) throw Error("report: rows for " + name + " out of order");
    it->rmse.push_back(get_num(row.at("rmse")));
  }
  return r;
}

RuleCheckReport rule_check_from(const Json& j) {
  const Json& meta = j.at("meta");
  RuleCheckReport r;
  r.n = meta.at("n").get<Index>();
  r.draws = meta.at("draws").get<int>();
  r.seed = meta.at("seed").get<std::uint64_t>();
  for (const auto& row : j.at("rows")) {
    ExactnessReport e;
    const auto kind = parse_scheme_kind(row.at("scheme").get<std::string>());
    if (!kind) throw Error("report: unknown scheme " + row.at("scheme").dump());
    e.kind = *kind;
    e.dimension = row.at("n").get<Index>();
    e.degree = row.at("degree").get<int>();
    e.draws = row.at("draws").get<int>();
    e.monomials_checked = row.at("monomials_checked").get<std::size_t>();
    e.max_deviation = get_num(row.at("max_deviation"));
    e.next_degree_deviation = get_num(row.at("next_degree_deviation"));
    e.next_degree_inexact = row.at("next_degree_inexact").get<bool>();
    r.rows.push_back(e);
  }
  return r;
}

}  // namespace

std::string_view tool_version() { return SRCF_VERSION; }

std::string format_json(const Report& report) { return to_json(report).dump(2) + "\n"; }

std::string format_csv(const Report& report) {
  const Json j = to_json(report);
  std::ostringstream os;
  write_csv_meta(os, j.at("meta"));
  const std::vector<std::string> columns = std::visit(
      Overloaded{
          [](const IntegralBenchReport&) {
            return std::vector<std::string>{"scheme", "re_max_pct", "re_mean_pct", "n_m", "points"};
          },
          [](const FilterBenchReport&) { return std::vector<std::string>{"scheme", "k", "rmse"}; },
          [](const RuleCheckReport&) {
            return std::vector<std::string>{"scheme",        "n",
                                            "degree",        "draws",
                                            "monomials_checked", "max_deviation",
                                            "next_degree_deviation", "next_degree_inexact"};
          },
      },
      report);
  write_csv_rows(os, j.at("rows"), columns);
  return os.str();
}

std::string format_report(const Report& report, Format format) {
  return format == Format::kJson ? format_json(report) : format_csv(report);
}

Report parse_json_report(const std::string& text) {
  try {
    const Json j = Json::parse(text);
    const std::string command = j.at("meta").at("command").get<std::string>();
    if (command == "integral-bench") return integral_from(j);
    if (command == "filter-bench") return filter_from(j);
    if (command == "rule-check") return rule_check_from(j);
    throw Error("report: unknown command '" + command + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report: ") + e.what());
  }
}

void emit_report(const Report& report, const BenchConfig& config) {
  const std::string text = format_report(report, config.format);
  if (!config.out) {
    std::cout << text << std::flush;
    if (!std::cout) throw Error("stdout: write failed");
    return;
  }
  std::ofstream file(*config.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(*config.out + ": " + std::strerror(errno));
  file << text;
  file.close();
  if (!file) throw Error(*config.out + ": " + std::strerror(errno));
}

}  // namespace srcf::cli
