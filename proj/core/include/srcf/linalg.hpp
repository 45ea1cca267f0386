#pragma once

#include <Eigen/Dense>

#include "srcf/rng.hpp"

namespace srcf {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Square root L of a symmetric positive semi-definite matrix, L * L^T = P.
///
/// Tries a Cholesky factorization first (L is then lower triangular). On
/// failure a diagonal jitter of 1e-9 * trace(P) / n is added once and the
/// factorization retried. If that also fails, the symmetric eigen
/// decomposition with negative eigenvalues clamped to zero is used and the
/// returned factor is V * sqrt(max(Lambda, 0)), which is not triangular.
///
/// Throws std::invalid_argument for non-square or empty input and for
/// NaN/Inf entries.
MatrixXd spd_sqrt(const MatrixXd& p);

/// Returns (A + A^T) / 2.
MatrixXd symmetrize(const MatrixXd& a);

/// Haar-distributed random orthogonal matrix.
///
/// Q factor of a Householder QR of an n x n standard-normal matrix, with each
/// column multiplied by the sign of the matching diagonal entry of R so the
/// factorization is unique and the result is Haar-uniform.
MatrixXd haar_orthogonal(Index n, RngStream& rng);

}  // namespace srcf
