#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "srcf/integrator.hpp"
#include "srcf/rules.hpp"

namespace srcf {

/// x_k = f(x_{k-1}) + w_k,  y_k = h(x_k) + v_k,  w ~ N(0, Q), v ~ N(0, R).
struct StateSpaceModel {
  std::function<VectorXd(const VectorXd&)> f;
  std::function<VectorXd(const VectorXd&)> h;
  MatrixXd process_noise;      // Q, n x n
  MatrixXd observation_noise;  // R, m x m

  Index state_dim() const noexcept { return process_noise.rows(); }
  Index obs_dim() const noexcept { return observation_noise.rows(); }
  void validate() const;
};

struct PredictedObservation {
  VectorXd mean;   // y-hat
  MatrixXd cross;  // Pxy, n x m
  MatrixXd cov;    // Pyy, m x m, includes R
};

/// Symmetrizes `cov` and checks that it factorizes; adds a jitter of
/// 1e-9 * trace / n once if not. Throws DivergenceError if the jittered matrix
/// still fails. `what` names the quantity for the error message.
MatrixXd condition_covariance(const MatrixXd& cov, const char* what);

GaussianBelief predict_state(const GaussianBelief& prior, const StateSpaceModel& model,
                             const IntegrationScheme& scheme, RngStream& rng);

PredictedObservation predict_observation(const GaussianBelief& predicted,
                                         const StateSpaceModel& model,
                                         const IntegrationScheme& scheme, RngStream& rng);

/// Kalman-form correction. Deterministic; solves against a pivoted LDL^T
/// factor of Pyy instead of inverting it, so an indefinite but invertible
/// Pyy estimate is accepted. Throws DivergenceError if Pyy is singular after
/// one jitter, or if the posterior covariance fails conditioning.
GaussianBelief correct(const GaussianBelief& predicted, const PredictedObservation& obs,
                       const VectorXd& y);

/// Runs predict/observe/correct over the observation sequence and returns the
/// posterior of every step. Throws DivergenceError carrying the failing step.
std::vector<GaussianBelief> run_filter(const StateSpaceModel& model,
                                       const IntegrationScheme& scheme,
                                       std::span<const VectorXd> observations,
                                       const GaussianBelief& init, RngStream& rng);

}  // namespace srcf
