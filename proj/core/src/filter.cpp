#include "srcf/filter.hpp"

#include <array>
#include <stdexcept>
#include <string>

#include "srcf/error.hpp"
#include "srcf/linalg.hpp"

namespace srcf {
namespace {

// Applies `map` to every column of `points`, returning one output per column.
MatrixXd map_columns(const std::function<VectorXd(const VectorXd&)>& map, const MatrixXd& points,
                     Index out_dim) {
  MatrixXd out(out_dim, points.cols());
  for (Index j = 0; j < points.cols(); ++j) {
    const VectorXd v = map(points.col(j));
    if (v.size() != out_dim) {
      throw std::invalid_argument("model function returned " + std::to_string(v.size()) +
                                  " values, expected " + std::to_string(out_dim));
    }
    out.col(j) = v;
  }
  return out;
}

// Column j of the result is vec_rowmajor(a_j b_j^T).
MatrixXd outer_columns(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index r = 0; r < a.rows(); ++r) out.col(j).segment(r * b.rows(), b.rows()) = a(r, j) * b.col(j);
  }
  return out;
}

bool invertible(const Eigen::LDLT<MatrixXd>& ldlt) {
  if (ldlt.info() != Eigen::Success) return false;
  const VectorXd d = ldlt.vectorD().cwiseAbs();
  return d.minCoeff() > 1e-14 * d.maxCoeff() && d.maxCoeff() > 0.0;
}

// Pyy only has to be invertible for the gain. Rules with negative weights can
// return an indefinite estimate, so this uses a pivoted LDL^T factorization.
Eigen::LDLT<MatrixXd> factorize(const MatrixXd& cov) {
  Eigen::LDLT<MatrixXd> ldlt(cov);
  if (invertible(ldlt)) return ldlt;
  const double jitter = 1e-9 * cov.diagonal().cwiseAbs().sum() / static_cast<double>(cov.rows());
  if (jitter > 0.0) {
    ldlt.compute(cov + jitter * MatrixXd::Identity(cov.rows(), cov.cols()));
    if (invertible(ldlt)) return ldlt;
  }
  throw DivergenceError("innovation covariance is singular");
}

}  // namespace

void StateSpaceModel::validate() const {
  if (!f || !h) throw std::invalid_argument("StateSpaceModel: transition and observation maps are required");
  const Index n = process_noise.rows();
  const Index m = observation_noise.rows();
  if (n < 1 || process_noise.cols() != n) throw std::invalid_argument("StateSpaceModel: Q must be square");
  if (m < 1 || observation_noise.cols() != m) throw std::invalid_argument("StateSpaceModel: R must be square");
  if (!process_noise.allFinite() || !observation_noise.allFinite()) {
    throw std::invalid_argument("StateSpaceModel: non-finite noise covariance");
  }
}

MatrixXd condition_covariance(const MatrixXd& cov, const char* what) {
  MatrixXd sym = symmetrize(cov);
  if (!sym.allFinite()) throw DivergenceError(std::string(what) + " has non-finite entries");
  Eigen::LLT<MatrixXd> llt(sym);
  if (llt.info() == Eigen::Success) return sym;
  const double jitter = 1e-9 * sym.trace() / static_cast<double>(sym.rows());
  if (jitter > 0.0) {
    sym.diagonal().array() += jitter;
    llt.compute(sym);
    if (llt.info() == Eigen::Success) return sym;
  }
  throw DivergenceError(std::string(what) + " is not positive definite after jitter");
}

GaussianBelief predict_state(const GaussianBelief& prior, const StateSpaceModel& model,
                             const IntegrationScheme& scheme, RngStream& rng) {
  const Index n = model.state_dim();
  if (prior.dimension() != n) throw std::invalid_argument("predict_state: prior dimension mismatch");
  const auto& f = model.f;

  const std::array<Integrand, 2> moments{
      Integrand([&f, n](const MatrixXd& x) { return map_columns(f, x, n); }, n),
      Integrand(
          [&f, n](const MatrixXd& x) {
            const MatrixXd fx = map_columns(f, x, n);
            return outer_columns(fx, fx);
          },
          n, n),
  };
  const auto est = expect_batch(moments, prior, scheme, rng);

  GaussianBelief out;
  out.mean = est[0];
  out.cov = condition_covariance(
      unflatten(est[1], n, n) - out.mean * out.mean.transpose() + model.process_noise, "predicted covariance");
  return out;
}

PredictedObservation predict_observation(const GaussianBelief& predicted, const StateSpaceModel& model,
                                         const IntegrationScheme& scheme, RngStream& rng) {
  const Index n = model.state_dim();
  const Index m = model.obs_dim();
  if (predicted.dimension() != n) throw std::invalid_argument("predict_observation: dimension mismatch");
  const auto& h = model.h;

  const std::array<Integrand, 3> moments{
      Integrand([&h, m](const MatrixXd& x) { return map_columns(h, x, m); }, m),
      Integrand([&h, m](const MatrixXd& x) { return outer_columns(x, map_columns(h, x, m)); }, n, m),
      Integrand(
          [&h, m](const MatrixXd& x) {
            const MatrixXd hx = map_columns(h, x, m);
            return outer_columns(hx, hx);
          },
          m, m),
  };
  const auto est = expect_batch(moments, predicted, scheme, rng);

  PredictedObservation out;
  out.mean = est[0];
  out.cross = unflatten(est[1], n, m) - predicted.mean * out.mean.transpose();
  out.cov = symmetrize(unflatten(est[2], m, m) - out.mean * out.mean.transpose() + model.observation_noise);
  if (!out.cov.allFinite() || !out.cross.allFinite()) {
    throw DivergenceError("predicted observation moments are not finite");
  }
  return out;
}

GaussianBelief correct(const GaussianBelief& predicted, const PredictedObservation& obs, const VectorXd& y) {
  const Index n = predicted.dimension();
  const Index m = obs.mean.size();
  if (y.size() != m || obs.cov.rows() != m || obs.cov.cols() != m || obs.cross.rows() != n ||
      obs.cross.cols() != m) {
    throw std::invalid_argument("correct: dimension mismatch");
  }
  const Eigen::LDLT<MatrixXd> ldlt = factorize(symmetrize(obs.cov));
  // gain^T = Pyy^{-1} Pxy^T
  const MatrixXd gain = ldlt.solve(obs.cross.transpose()).transpose();

  GaussianBelief out;
  out.mean = predicted.mean + gain * (y - obs.mean);
  out.cov = condition_covariance(predicted.cov - gain * obs.cross.transpose(), "posterior covariance");
  return out;
}

std::vector<GaussianBelief> run_filter(const StateSpaceModel& model, const IntegrationScheme& scheme,
                                       std::span<const VectorXd> observations, const GaussianBelief& init,
                                       RngStream& rng) {
  model.validate();
  if (observations.empty()) throw std::invalid_argument("run_filter: empty observation sequence");
  scheme.validate(model.state_dim());

  std::vector<GaussianBelief> posteriors;
  posteriors.reserve(observations.size());
  GaussianBelief belief = init;
  for (std::size_t k = 0; k < observations.size(); ++k) {
    try {
      const GaussianBelief predicted = predict_state(belief, model, scheme, rng);
      const PredictedObservation obs = predict_observation(predicted, model, scheme, rng);
      belief = correct(predicted, obs, observations[k]);
    } catch (const DivergenceError& e) {
      throw DivergenceError(std::string("step ") + std::to_string(k) + ": " + e.what(), static_cast<long>(k));
    } catch (const NonFiniteIntegrand& e) {
      throw DivergenceError(std::string("step ") + std::to_string(k) + ": " + e.what(), static_cast<long>(k));
    }
    posteriors.push_back(belief);
  }
  return posteriors;
}

}  // namespace srcf
