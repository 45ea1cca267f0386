#include "srcf/samplers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "srcf/error.hpp"

namespace srcf {

double sample_chi(int dof, RngStream& rng) {
  if (dof < 1) throw std::invalid_argument("sample_chi: dof must be >= 1, got " + std::to_string(dof));
  // chi^2_k = Gamma(k / 2, scale 2); handles odd k without summing normals.
  for (;;) {
    const double x = std::sqrt(rng.gamma(0.5 * dof, 2.0));
    if (x > 0.0) return x;
  }
}

double sample_beta(double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("sample_beta: parameters must be positive");
  }
  for (;;) {
    const double x = rng.gamma(alpha);
    const double y = rng.gamma(beta);
    const double b = x / (x + y);
    if (b > 0.0 && b < 1.0) return b;
  }
}

double sample_radial_single(Eigen::Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_radial_single: dimension must be >= 1");
  return sample_chi(static_cast<int>(n) + 2, rng);
}

RadialPair sample_radial_pair(Eigen::Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_radial_pair: dimension must be >= 1");
  constexpr int kMaxAttempts = 100;
  constexpr double kMinGap = 1e-12;
  const int dof = 2 * static_cast<int>(n) + 7;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double radius = sample_chi(dof, rng);
    const double mix = sample_beta(static_cast<double>(n) + 2.0, 1.5, rng);
    const double half_angle = 0.5 * std::asin(mix);
    const RadialPair pair{radius * std::sin(half_angle), radius * std::cos(half_angle)};
    if (pair.inner >= kMinGap && pair.outer - pair.inner >= kMinGap) return pair;
  }
  throw Error("sample_radial_pair: no non-degenerate pair after 100 attempts");
}

}  // namespace srcf
