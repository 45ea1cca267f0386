#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "srcf/rng.hpp"
#include "srcf/rules.hpp"

namespace srcf {

/// Gaussian density N(mean, cov).
struct GaussianBelief {
  VectorXd mean;
  MatrixXd cov;

  Index dimension() const noexcept { return mean.size(); }
  /// Throws std::invalid_argument on shape mismatch, non-finite entries or an
  /// asymmetric covariance.
  void validate() const;
};

/// Function x -> s(x) with a declared output shape, evaluated on batches.
///
/// The batch form receives an n x N matrix of points (one per column) and
/// returns a (rows * cols) x N matrix. Matrix-valued functions are stored
/// flattened row-major; `unflatten` restores the shape.
class Integrand {
 public:
  using BatchFn = std::function<MatrixXd(const MatrixXd&)>;
  using VectorFn = std::function<VectorXd(const VectorXd&)>;
  using MatrixFn = std::function<MatrixXd(const VectorXd&)>;
  using ScalarFn = std::function<double(const VectorXd&)>;

  Integrand(BatchFn fn, Index rows, Index cols = 1);

  static Integrand pointwise(VectorFn fn, Index rows);
  static Integrand matrix(MatrixFn fn, Index rows, Index cols);
  static Integrand scalar(ScalarFn fn);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index output_size() const noexcept { return rows_ * cols_; }

  /// Evaluates on every column of `points`; checks the returned shape.
  MatrixXd operator()(const MatrixXd& points) const;

 private:
  BatchFn fn_;
  Index rows_;
  Index cols_;
};

/// Restores a row-major flattened matrix.
MatrixXd unflatten(const VectorXd& flat, Index rows, Index cols);

/// Estimates E[s(x)] for x ~ belief by pushing rule points through
/// x = mean + L c with L = spd_sqrt(cov), averaged over the scheme's
/// repetitions. Each repetition draws from its own substream of a key taken
/// from `rng`, and repetition results are combined by pairwise summation in
/// index order. The mean point is evaluated once and shared by all draws.
///
/// Throws NonFiniteIntegrand naming the offending point.
VectorXd expect(const Integrand& s, const GaussianBelief& belief,
                const IntegrationScheme& scheme, RngStream& rng);

/// Like `expect` for several functions evaluated on the same draws.
std::vector<VectorXd> expect_batch(std::span<const Integrand> fns, const GaussianBelief& belief,
                                   const IntegrationScheme& scheme, RngStream& rng);

/// Pairwise (cascade) sum in index order.
VectorXd pairwise_sum(std::span<const VectorXd> terms);

}  // namespace srcf
