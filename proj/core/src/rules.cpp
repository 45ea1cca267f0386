#include "srcf/rules.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <span>
#include <utility>

#include "srcf/linalg.hpp"

namespace srcf {
namespace {

constexpr std::array<std::pair<SchemeKind, std::string_view>, 6> kNames{{
    {SchemeKind::kCkf3, "ckf3"},
    {SchemeKind::kCkf5, "ckf5"},
    {SchemeKind::kSif3, "sif3"},
    {SchemeKind::kSif5, "sif5"},
    {SchemeKind::kQsif5, "qsif5"},
    {SchemeKind::kMc, "mc"},
}};

bool fifth_degree(SchemeKind kind) {
  return kind == SchemeKind::kCkf5 || kind == SchemeKind::kSif5 || kind == SchemeKind::kQsif5;
}

std::size_t as_size(Index n) { return static_cast<std::size_t>(n); }

// Product of the simplex spherical rule (rotated by q) with a radial rule
// {0} u {radii}. Each +/- pair is stored in adjacent columns.
SigmaPointSet simplex_product_rule(Index n, std::span<const double> radii,
                                   std::span<const double> radial_weights, double center_weight,
                                   const MatrixXd& q) {
  const MatrixXd vertices = q * simplex_vertices(n);
  const MatrixXd midpoints = q * simplex_midpoints(n, simplex_vertices(n));
  const SphericalWeights5 sw = spherical_weights_deg5(n);

  const Index per_radius = 2 * (vertices.cols() + midpoints.cols());
  const Index total = 1 + per_radius * static_cast<Index>(radii.size());

  SigmaPointSet rule;
  rule.points.setZero(n, total);
  rule.weights.resize(total);
  rule.has_center = true;
  rule.symmetric_nodes = 1 + radii.size() * as_size(per_radius / 2);
  rule.weights(0) = center_weight;

  Index col = 1;
  auto emit = [&](const MatrixXd& dirs, double rho, double weight) {
    for (Index j = 0; j < dirs.cols(); ++j) {
      rule.points.col(col) = rho * dirs.col(j);
      rule.points.col(col + 1) = -rho * dirs.col(j);
      rule.weights(col) = weight;
      rule.weights(col + 1) = weight;
      col += 2;
    }
  };
  for (std::size_t i = 0; i < radii.size(); ++i) {
    emit(vertices, radii[i], radial_weights[i] * sw.vertex);
    emit(midpoints, radii[i], radial_weights[i] * sw.midpoint);
  }
  return rule;
}

// Radial nodes {0, sqrt(n + 2)} matched to the radial moments 1, n, n(n + 2).
SigmaPointSet deterministic_fifth(Index n, const MatrixXd& q) {
  const double nd = static_cast<double>(n);
  const std::array<double, 1> radii{std::sqrt(nd + 2.0)};
  const std::array<double, 1> weights{nd / (nd + 2.0)};
  return simplex_product_rule(n, radii, weights, 2.0 / (nd + 2.0), q);
}

SigmaPointSet cubature3(Index n) {
  SigmaPointSet rule;
  const double scale = std::sqrt(static_cast<double>(n));
  rule.points.resize(n, 2 * n);
  rule.points.leftCols(n) = scale * MatrixXd::Identity(n, n);
  rule.points.rightCols(n) = -scale * MatrixXd::Identity(n, n);
  rule.weights = VectorXd::Constant(2 * n, 1.0 / static_cast<double>(2 * n));
  rule.symmetric_nodes = as_size(n);
  return rule;
}

SigmaPointSet stochastic3(Index n, RngStream& rng) {
  const double rho = sample_radial_single(n, rng);
  const MatrixXd q = haar_orthogonal(n, rng);
  const RadialWeights3 rw = radial_weights_deg3(n, rho);
  const double node_weight = rw.node / static_cast<double>(2 * n);

  SigmaPointSet rule;
  rule.points.setZero(n, 1 + 2 * n);
  rule.weights.resize(1 + 2 * n);
  rule.weights(0) = rw.center;
  for (Index i = 0; i < n; ++i) {
    rule.points.col(1 + 2 * i) = rho * q.col(i);
    rule.points.col(2 + 2 * i) = -rho * q.col(i);
    rule.weights(1 + 2 * i) = node_weight;
    rule.weights(2 + 2 * i) = node_weight;
  }
  rule.has_center = true;
  rule.symmetric_nodes = 1 + as_size(n);
  return rule;
}

SigmaPointSet stochastic5(Index n, RngStream& rng) {
  const RadialPair nodes = sample_radial_pair(n, rng);
  const MatrixXd q = haar_orthogonal(n, rng);
  const RadialWeights5 rw = radial_weights_deg5(n, nodes);
  const std::array<double, 2> radii{nodes.inner, nodes.outer};
  const std::array<double, 2> weights{rw.inner, rw.outer};
  return simplex_product_rule(n, radii, weights, rw.center, q);
}

SigmaPointSet monte_carlo(Index n, int samples, RngStream& rng) {
  SigmaPointSet rule;
  rule.points.resize(n, samples);
  for (Index j = 0; j < samples; ++j) {
    for (Index i = 0; i < n; ++i) rule.points(i, j) = rng.normal();
  }
  rule.weights = VectorXd::Constant(samples, 1.0 / samples);
  rule.symmetric_nodes = static_cast<std::size_t>(samples);
  return rule;
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<SchemeKind> parse_scheme_kind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool IntegrationScheme::deterministic() const noexcept {
  return kind == SchemeKind::kCkf3 || kind == SchemeKind::kCkf5;
}

int IntegrationScheme::degree() const noexcept {
  switch (kind) {
    case SchemeKind::kCkf3:
    case SchemeKind::kSif3:
      return 3;
    case SchemeKind::kCkf5:
    case SchemeKind::kSif5:
    case SchemeKind::kQsif5:
      return 5;
    case SchemeKind::kMc:
      return 0;
  }
  return 0;
}

int IntegrationScheme::effective_repetitions() const noexcept {
  return deterministic() ? 1 : repetitions;
}

Index IntegrationScheme::min_dimension() const noexcept { return fifth_degree(kind) ? 2 : 1; }

void IntegrationScheme::validate(Index n) const {
  const std::string name(to_string(kind));
  if (repetitions < 1) {
    throw std::invalid_argument(name + ": repetitions must be >= 1, got " + std::to_string(repetitions));
  }
  if (kind == SchemeKind::kMc && mc_samples < 1) {
    throw std::invalid_argument("mc: sample count must be >= 1, got " + std::to_string(mc_samples));
  }
  if (n < min_dimension()) {
    throw std::invalid_argument(name + ": dimension " + std::to_string(n) + " not supported (minimum " +
                                std::to_string(min_dimension()) + ")");
  }
}

RadialWeights5 radial_weights_deg5(Index n, RadialPair nodes) {
  const double r1 = nodes.inner * nodes.inner;
  const double r2 = nodes.outer * nodes.outer;
  if (!(nodes.inner > 0.0) || !(nodes.outer > 0.0) || r1 == r2) {
    throw std::invalid_argument("radial_weights_deg5: nodes must be positive and distinct");
  }
  const double nd = static_cast<double>(n);
  return {
      1.0 - nd * (r1 + r2 - (nd + 2.0)) / (r1 * r2),
      nd * (nd + 2.0 - r2) / (r1 * (r1 - r2)),
      nd * (nd + 2.0 - r1) / (r2 * (r2 - r1)),
  };
}

RadialWeights3 radial_weights_deg3(Index n, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("radial_weights_deg3: node must be positive");
  const double node = static_cast<double>(n) / (rho * rho);
  return {1.0 - node, node};
}

MatrixXd simplex_vertices(Index n) {
  if (n < 1) throw std::invalid_argument("simplex_vertices: dimension must be >= 1");
  const double nd = static_cast<double>(n);
  MatrixXd a = MatrixXd::Zero(n, n + 1);
  // 1-based j (vertex) and k (coordinate).
  for (Index j = 1; j <= n + 1; ++j) {
    for (Index k = 1; k <= std::min(j, n); ++k) {
      const double kd = static_cast<double>(k);
      const double jd = static_cast<double>(j);
      a(k - 1, j - 1) = k < j ? -std::sqrt((nd + 1.0) / (nd * (nd - kd + 2.0) * (nd - kd + 1.0)))
                              : std::sqrt((nd + 1.0) * (nd - jd + 1.0) / (nd * (nd - jd + 2.0)));
    }
  }
  return a;
}

MatrixXd simplex_midpoints(Index n, const MatrixXd& vertices) {
  if (vertices.rows() != n || vertices.cols() != n + 1) {
    throw std::invalid_argument("simplex_midpoints: expected n x (n + 1) vertices");
  }
  if (n < 2) return MatrixXd(n, 0);
  const double scale = std::sqrt(static_cast<double>(n) / (2.0 * static_cast<double>(n - 1)));
  MatrixXd b(n, n * (n + 1) / 2);
  Index col = 0;
  for (Index k = 0; k <= n; ++k) {
    for (Index l = k + 1; l <= n; ++l) b.col(col++) = scale * (vertices.col(k) + vertices.col(l));
  }
  return b;
}

SphericalWeights5 spherical_weights_deg5(Index n) {
  if (n < 2) throw std::invalid_argument("spherical_weights_deg5: dimension must be >= 2");
  const double nd = static_cast<double>(n);
  const double denom = (nd + 1.0) * (nd + 2.0);
  const double vertex_mass = nd * (7.0 - nd) / denom;
  const double midpoint_mass = 2.0 * (nd - 1.0) * (nd - 1.0) / denom;
  return {vertex_mass / (2.0 * (nd + 1.0)), midpoint_mass / (nd * (nd + 1.0))};
}

SigmaPointSet build_rule(const IntegrationScheme& scheme, Index n, RngStream& rng) {
  scheme.validate(n);
  switch (scheme.kind) {
    case SchemeKind::kCkf3:
      return cubature3(n);
    case SchemeKind::kCkf5:
      return deterministic_fifth(n, MatrixXd::Identity(n, n));
    case SchemeKind::kSif3:
      return stochastic3(n, rng);
    case SchemeKind::kSif5:
      return stochastic5(n, rng);
    case SchemeKind::kQsif5:
      return deterministic_fifth(n, haar_orthogonal(n, rng));
    case SchemeKind::kMc:
      return monte_carlo(n, scheme.mc_samples, rng);
  }
  throw std::invalid_argument("build_rule: unknown scheme");
}

std::size_t points_per_draw(const IntegrationScheme& scheme, Index n) {
  const std::size_t sphere = as_size((n + 1) * (n + 2));
  switch (scheme.kind) {
    case SchemeKind::kCkf3:
      return as_size(2 * n);
    case SchemeKind::kSif3:
      return as_size(2 * n + 1);
    case SchemeKind::kCkf5:
    case SchemeKind::kQsif5:
      return 1 + sphere;
    case SchemeKind::kSif5:
      return 1 + 2 * sphere;
    case SchemeKind::kMc:
      return static_cast<std::size_t>(scheme.mc_samples);
  }
  return 0;
}

std::size_t symmetric_nodes_per_draw(const IntegrationScheme& scheme, Index n) {
  switch (scheme.kind) {
    case SchemeKind::kCkf3:
      return as_size(n);
    case SchemeKind::kMc:
      return static_cast<std::size_t>(scheme.mc_samples);
    default:
      return 1 + (points_per_draw(scheme, n) - 1) / 2;
  }
}

std::size_t evaluations_per_estimate(const IntegrationScheme& scheme, Index n) {
  const auto reps = static_cast<std::size_t>(scheme.effective_repetitions());
  const std::size_t per_draw = points_per_draw(scheme, n);
  const bool center = scheme.kind != SchemeKind::kCkf3 && scheme.kind != SchemeKind::kMc;
  return center ? reps * (per_draw - 1) + 1 : reps * per_draw;
}

}  // namespace srcf
