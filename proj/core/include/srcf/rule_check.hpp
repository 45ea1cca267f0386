#pragma once

#include <cstddef>
#include <vector>

#include "srcf/rules.hpp"

namespace srcf {

/// Exponent vector of a monomial c_1^e_1 ... c_n^e_n.
using Multiindex = std::vector<int>;

/// All multi-indices of total degree exactly `degree` in n variables.
std::vector<Multiindex> monomials_of_degree(Index n, int degree);

/// E[c^alpha] under N(0, I): product of (e_i - 1)!! over coordinates, zero if
/// any exponent is odd.
double gaussian_moment(const Multiindex& alpha);

/// Value of the monomial integrated by one rule draw.
double rule_moment(const SigmaPointSet& rule, const Multiindex& alpha);

struct ExactnessReport {
  SchemeKind kind{};
  Index dimension = 0;
  int degree = 0;
  int draws = 0;
  std::size_t monomials_checked = 0;
  /// Max |rule - moment| over all draws and monomials of degree <= degree.
  double max_deviation = 0.0;
  /// Max |rule - moment| over degree + 1 monomials.
  double next_degree_deviation = 0.0;
  /// Some degree + 1 monomial missed its moment by more than 1e-6 on a draw.
  bool next_degree_inexact = false;
};

/// Integrates every monomial of total degree <= d + 1 (d the rule degree) on
/// `draws` independent rule draws.
ExactnessReport rule_check(Index n, const IntegrationScheme& scheme, int draws, RngStream& rng);

}  // namespace srcf
