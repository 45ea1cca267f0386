#include "srcf/rule_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srcf {
namespace {

void enumerate(Index var, int remaining, Multiindex& current, std::vector<Multiindex>& out) {
  const Index n = static_cast<Index>(current.size());
  if (var == n - 1) {
    current[static_cast<std::size_t>(var)] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate(var + 1, remaining - e, current, out);
  }
}

// powers[e](i, j) = points(i, j)^e for e = 0..max_power.
std::vector<Eigen::ArrayXXd> power_table(const MatrixXd& points, int max_power) {
  std::vector<Eigen::ArrayXXd> powers;
  powers.reserve(static_cast<std::size_t>(max_power) + 1);
  powers.push_back(Eigen::ArrayXXd::Ones(points.rows(), points.cols()));
  for (int e = 1; e <= max_power; ++e) powers.push_back(powers.back() * points.array());
  return powers;
}

double moment_from_table(const std::vector<Eigen::ArrayXXd>& powers, const VectorXd& weights,
                         const Multiindex& alpha) {
  Eigen::ArrayXd product = Eigen::ArrayXd::Ones(weights.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] != 0) product *= powers[static_cast<std::size_t>(alpha[i])].row(static_cast<Index>(i)).transpose();
  }
  return (product * weights.array()).sum();
}

}  // namespace

std::vector<Multiindex> monomials_of_degree(Index n, int degree) {
  if (n < 1 || degree < 0) throw std::invalid_argument("monomials_of_degree: bad arguments");
  std::vector<Multiindex> out;
  Multiindex current(static_cast<std::size_t>(n), 0);
  enumerate(0, degree, current, out);
  return out;
}

double gaussian_moment(const Multiindex& alpha) {
  double moment = 1.0;
  for (int e : alpha) {
    if (e % 2 != 0) return 0.0;
    for (int k = e - 1; k > 1; k -= 2) moment *= k;
  }
  return moment;
}

double rule_moment(const SigmaPointSet& rule, const Multiindex& alpha) {
  const int max_power = alpha.empty() ? 0 : *std::max_element(alpha.begin(), alpha.end());
  return moment_from_table(power_table(rule.points, max_power), rule.weights, alpha);
}

ExactnessReport rule_check(Index n, const IntegrationScheme& scheme, int draws, RngStream& rng) {
  scheme.validate(n);
  if (draws < 1) throw std::invalid_argument("rule_check: draws must be >= 1");

  ExactnessReport report;
  report.kind = scheme.kind;
  report.dimension = n;
  report.degree = scheme.degree();
  report.draws = draws;

  std::vector<std::pair<Multiindex, double>> exact;
  for (int d = 0; d <= report.degree; ++d) {
    for (auto& alpha : monomials_of_degree(n, d)) {
      const double m = gaussian_moment(alpha);
      exact.emplace_back(std::move(alpha), m);
    }
  }
  std::vector<std::pair<Multiindex, double>> next;
  for (auto& alpha : monomials_of_degree(n, report.degree + 1)) {
    const double m = gaussian_moment(alpha);
    next.emplace_back(std::move(alpha), m);
  }
  report.monomials_checked = exact.size() + next.size();

  for (int draw = 0; draw < draws; ++draw) {
    const SigmaPointSet rule = build_rule(scheme, n, rng);
    const auto powers = power_table(rule.points, report.degree + 1);
    for (const auto& [alpha, m] : exact) {
      report.max_deviation = std::max(report.max_deviation,
                                      std::abs(moment_from_table(powers, rule.weights, alpha) - m));
    }
    for (const auto& [alpha, m] : next) {
      report.next_degree_deviation = std::max(
          report.next_degree_deviation, std::abs(moment_from_table(powers, rule.weights, alpha) - m));
    }
  }
  report.next_degree_inexact = report.next_degree_deviation > 1e-6;
  return report;
}

}  // namespace srcf
