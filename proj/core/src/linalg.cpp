#include "srcf/linalg.hpp"

#include <stdexcept>

namespace srcf {

MatrixXd symmetrize(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

MatrixXd spd_sqrt(const MatrixXd& p) {
  if (p.rows() == 0 || p.rows() != p.cols()) {
    throw std::invalid_argument("spd_sqrt: expected a non-empty square matrix, got " +
                                std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
  }
  if (!p.allFinite()) throw std::invalid_argument("spd_sqrt: matrix has NaN or Inf entries");

  Eigen::LLT<MatrixXd> llt(p);
  if (llt.info() == Eigen::Success) return llt.matrixL();

  const double jitter = 1e-9 * p.trace() / static_cast<double>(p.rows());
  if (jitter > 0.0) {
    MatrixXd jittered = p;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }

  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(symmetrize(p));
  const VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

MatrixXd haar_orthogonal(Index n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("haar_orthogonal: dimension must be >= 1");
  MatrixXd x(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<MatrixXd> qr(x);
  MatrixXd q = qr.householderQ();
  const MatrixXd& r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace srcf
