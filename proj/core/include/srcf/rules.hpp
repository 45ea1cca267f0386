#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "srcf/rng.hpp"
#include "srcf/samplers.hpp"

namespace srcf {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class SchemeKind {
  kCkf3,   // deterministic third-degree cubature, 2n points
  kCkf5,   // deterministic fifth-degree spherical-simplex/radial rule
  kSif3,   // stochastic third-degree rule
  kSif5,   // stochastic fifth-degree rule
  kQsif5,  // fifth-degree rule with deterministic radii and random rotation
  kMc,     // plain Monte-Carlo
};

std::string_view to_string(SchemeKind kind);
std::optional<SchemeKind> parse_scheme_kind(std::string_view name);

/// Which rule to use and how many independent draws to average.
struct IntegrationScheme {
  SchemeKind kind = SchemeKind::kSif5;
  int repetitions = 1;  // N_m
  int mc_samples = 0;   // only meaningful for kMc

  static IntegrationScheme ckf3() { return {SchemeKind::kCkf3, 1, 0}; }
  static IntegrationScheme ckf5() { return {SchemeKind::kCkf5, 1, 0}; }
  static IntegrationScheme sif3(int reps) { return {SchemeKind::kSif3, reps, 0}; }
  static IntegrationScheme sif5(int reps) { return {SchemeKind::kSif5, reps, 0}; }
  static IntegrationScheme qsif5(int reps) { return {SchemeKind::kQsif5, reps, 0}; }
  static IntegrationScheme mc(int samples, int reps = 1) {
    return {SchemeKind::kMc, reps, samples};
  }

  bool deterministic() const noexcept;
  /// Polynomial degree the rule is exact for on every draw (0 for MC).
  int degree() const noexcept;
  /// Repetitions actually performed: 1 for deterministic kinds.
  int effective_repetitions() const noexcept;
  /// Smallest dimension the rule supports.
  Index min_dimension() const noexcept;

  /// Throws std::invalid_argument when the scheme is malformed or does not
  /// support dimension n.
  void validate(Index n) const;

  bool operator==(const IntegrationScheme&) const = default;
};

/// One draw of an integration rule in standard-normal coordinates.
///
/// Points are stored explicitly, including both members of every symmetric
/// pair +/-c. When `has_center` is set, column 0 is the origin and carries the
/// aggregated center weight. `symmetric_nodes` counts the center once and
/// every +/-c pair once, which is the accounting used when the symmetrized
/// integrand (g(c) + g(-c)) / 2 is treated as a single evaluation.
struct SigmaPointSet {
  MatrixXd points;  // n x N
  VectorXd weights;
  bool has_center = false;
  std::size_t symmetric_nodes = 0;

  Index dimension() const noexcept { return points.rows(); }
  Index size() const noexcept { return points.cols(); }
};

struct RadialWeights5 {
  double center;
  double inner;
  double outer;
};

struct RadialWeights3 {
  double center;
  double node;
};

/// Probability-normalized weights of the fifth-degree radial rule with nodes
/// {0, inner, outer}. Throws std::invalid_argument for zero or coincident
/// nodes.
RadialWeights5 radial_weights_deg5(Index n, RadialPair nodes);

/// Probability-normalized weights of the third-degree radial rule {0, rho}.
RadialWeights3 radial_weights_deg3(Index n, double rho);

/// Unit vertices a_1..a_{n+1} of a regular n-simplex, one per column.
MatrixXd simplex_vertices(Index n);

/// Projected pairwise midpoints sqrt(n / (2(n-1))) (a_k + a_l), k < l, in
/// lexicographic order, one per column. Empty (n x 0) for n = 1.
MatrixXd simplex_midpoints(Index n, const MatrixXd& vertices);

/// Per-point weights of the fifth-degree spherical-simplex rule over the
/// 2(n+1) points +/-a_j and the n(n+1) points +/-b_j. Normalized so the whole
/// rule has unit mass. The vertex weight is negative for n > 7.
struct SphericalWeights5 {
  double vertex;
  double midpoint;
};
SphericalWeights5 spherical_weights_deg5(Index n);

/// Draws one realization of the scheme's point set for dimension n.
/// Deterministic kinds ignore `rng`.
SigmaPointSet build_rule(const IntegrationScheme& scheme, Index n, RngStream& rng);

/// Points in one draw, counting +/- members separately.
std::size_t points_per_draw(const IntegrationScheme& scheme, Index n);

/// Symmetric-pair node count of one draw (see SigmaPointSet).
std::size_t symmetric_nodes_per_draw(const IntegrationScheme& scheme, Index n);

/// Distinct integrand evaluations made by one call of `expect`: every draw's
/// non-center points plus a single shared evaluation at the mean.
std::size_t evaluations_per_estimate(const IntegrationScheme& scheme, Index n);

}  // namespace srcf
