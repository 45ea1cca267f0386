#pragma once

#include <Eigen/Core>

#include "srcf/rng.hpp"

namespace srcf {

/// Square root of a chi-square variate with `dof` degrees of freedom.
double sample_chi(int dof, RngStream& rng);

/// Beta(alpha, beta) variate in the open interval (0, 1), computed as a ratio
/// of gamma variates.
double sample_beta(double alpha, double beta, RngStream& rng);

/// Radial node pair for the fifth-degree stochastic radial rule, inner < outer.
struct RadialPair {
  double inner;
  double outer;
};

/// Single radial node for the third-degree rule: chi with n + 2 degrees of
/// freedom, i.e. density proportional to rho^(n+1) exp(-rho^2 / 2).
double sample_radial_single(Eigen::Index n, RngStream& rng);

/// Radial node pair with joint density proportional to
///   (r1 r2)^(n+1) exp(-(r1^2 + r2^2) / 2) (r2 - r1)^2 (r2 + r1),  r1 < r2.
///
/// Drawn as eta1 ~ chi(2n + 7), eta2 ~ Beta(n + 2, 3/2) and
///   r1 = eta1 sin(asin(eta2) / 2),  r2 = eta1 cos(asin(eta2) / 2).
/// Pairs closer than 1e-12 (or with r1 < 1e-12) are redrawn; throws
/// srcf::Error after 100 failed attempts.
RadialPair sample_radial_pair(Eigen::Index n, RngStream& rng);

}  // namespace srcf
