#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oracles/kalman.hpp"
#include "srcf/error.hpp"
#include "srcf/bench.hpp"
#include "srcf/filter.hpp"

using namespace srcf;

namespace {

std::vector<IntegrationScheme> all_schemes() {
  return {IntegrationScheme::ckf3(),  IntegrationScheme::ckf5(),  IntegrationScheme::sif3(5),
          IntegrationScheme::sif5(2), IntegrationScheme::qsif5(2)};
}

MatrixXd random_matrix(Index r, Index c, RngStream& rng) {
  MatrixXd m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

MatrixXd random_spd(Index n, RngStream& rng) {
  const MatrixXd a = random_matrix(n, n, rng);
  const MatrixXd s = a * a.transpose() / static_cast<double>(n) + 0.2 * MatrixXd::Identity(n, n);
  return 0.5 * (s + s.transpose());
}

StateSpaceModel linear_model(const oracle::LinearGaussianModel& m) {
  return {[a = m.a](const VectorXd& x) { return VectorXd(a * x); },
          [c = m.c](const VectorXd& x) { return VectorXd(c * x); }, m.q, m.r};
}

oracle::LinearGaussianModel random_linear(Index n, Index m, RngStream& rng) {
  MatrixXd a = random_matrix(n, n, rng);
  const double radius = Eigen::EigenSolver<MatrixXd>(a).eigenvalues().cwiseAbs().maxCoeff();
  a *= 0.95 / radius;
  return {a, random_matrix(m, n, rng), random_spd(n, rng), random_spd(m, rng)};
}

double max_abs(const MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("identity dynamics without process noise keep the prior") {
  RngStream rng(50);
  const StateSpaceModel model{[](const VectorXd& x) { return x; }, [](const VectorXd& x) { return x; },
                              MatrixXd::Zero(3, 3), MatrixXd::Identity(3, 3)};
  const GaussianBelief prior{VectorXd::LinSpaced(3, -1.0, 2.0), random_spd(3, rng)};
  for (const auto& s : all_schemes()) {
    const GaussianBelief p = predict_state(prior, model, s, rng);
    CHECK(max_abs(p.mean - prior.mean) < 1e-9);
    CHECK(max_abs(p.cov - prior.cov) < 1e-9);
  }
}

TEST_CASE("linear prediction matches the closed form") {
  RngStream rng(51);
  const auto lin = random_linear(4, 2, rng);
  const StateSpaceModel model = linear_model(lin);
  const GaussianBelief prior{VectorXd::Constant(4, 2.0), random_spd(4, rng)};
  for (const auto& s : all_schemes()) {
    const GaussianBelief p = predict_state(prior, model, s, rng);
    CHECK(max_abs(p.mean - lin.a * prior.mean) < 1e-8);
    CHECK(max_abs(p.cov - (lin.a * prior.cov * lin.a.transpose() + lin.q)) < 1e-8);

    const PredictedObservation o = predict_observation(prior, model, s, rng);
    CHECK(max_abs(o.mean - lin.c * prior.mean) < 1e-8);
    CHECK(max_abs(o.cross - prior.cov * lin.c.transpose()) < 1e-8);
    CHECK(max_abs(o.cov - (lin.c * prior.cov * lin.c.transpose() + lin.r)) < 1e-8);
  }
}

TEST_CASE("growth-model transition from the initial belief") {
  RngStream rng(52);
  const StateSpaceModel model{[](const VectorXd& x) { return VectorXd(0.9 * x); },
                              [](const VectorXd& x) { return VectorXd::Constant(1, x.squaredNorm()); },
                              100.0 * MatrixXd::Identity(10, 10), MatrixXd::Constant(1, 1, 10.0)};
  const GaussianBelief prior{VectorXd::Ones(10), 10.0 * MatrixXd::Identity(10, 10)};
  for (const auto& s : all_schemes()) {
    const GaussianBelief p = predict_state(prior, model, s, rng);
    CHECK(max_abs(p.mean - VectorXd::Constant(10, 0.9)) < 1e-9);
    CHECK(max_abs(p.cov - 108.1 * MatrixXd::Identity(10, 10)) < 1e-9);
  }
}

TEST_CASE("observation prediction for identity and constant maps") {
  RngStream rng(53);
  const GaussianBelief pred{VectorXd::LinSpaced(3, 0.0, 1.0), random_spd(3, rng)};
  const StateSpaceModel ident{[](const VectorXd& x) { return x; }, [](const VectorXd& x) { return x; },
                              MatrixXd::Identity(3, 3), MatrixXd::Zero(3, 3)};
  const StateSpaceModel constant{[](const VectorXd& x) { return x; },
                                 [](const VectorXd&) { return VectorXd::Constant(1, 4.0); },
                                 MatrixXd::Identity(3, 3), MatrixXd::Constant(1, 1, 0.5)};
  for (const auto& s : all_schemes()) {
    const PredictedObservation a = predict_observation(pred, ident, s, rng);
    CHECK(max_abs(a.mean - pred.mean) < 1e-8);
    CHECK(max_abs(a.cross - pred.cov) < 1e-8);
    CHECK(max_abs(a.cov - pred.cov) < 1e-8);

    const PredictedObservation b = predict_observation(pred, constant, s, rng);
    CHECK(std::abs(b.mean(0) - 4.0) < 1e-12);
    CHECK(max_abs(b.cross) < 1e-12);
    CHECK(std::abs(b.cov(0, 0) - 0.5) < 1e-12);
  }
}

TEST_CASE("correction step") {
  SUBCASE("one-dimensional hand case") {
    const GaussianBelief pred{VectorXd::Constant(1, 3.0), MatrixXd::Constant(1, 1, 1.0)};
    const PredictedObservation obs{VectorXd::Constant(1, 0.0), MatrixXd::Constant(1, 1, 1.0),
                                   MatrixXd::Constant(1, 1, 2.0)};
    const GaussianBelief post = correct(pred, obs, VectorXd::Constant(1, 2.0));
    CHECK(post.mean(0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(post.cov(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("zero cross covariance leaves the prediction") {
    RngStream rng(54);
    const GaussianBelief pred{VectorXd::Constant(3, 1.0), random_spd(3, rng)};
    const PredictedObservation obs{VectorXd::Zero(2), MatrixXd::Zero(3, 2), random_spd(2, rng)};
    const GaussianBelief post = correct(pred, obs, VectorXd::Constant(2, 7.0));
    CHECK(post.mean == pred.mean);
    CHECK(max_abs(post.cov - pred.cov) < 1e-15);
  }
  SUBCASE("linear model matches the Kalman update") {
    RngStream rng(55);
    const auto lin = random_linear(4, 2, rng);
    const oracle::KalmanState prior{VectorXd::Constant(4, -1.0), random_spd(4, rng)};
    const VectorXd y = VectorXd::Constant(2, 0.3);
    const auto expected = oracle::kalman_update(lin, prior, y);
    const PredictedObservation obs{lin.c * prior.mean, prior.cov * lin.c.transpose(),
                                   lin.c * prior.cov * lin.c.transpose() + lin.r};
    const GaussianBelief post = correct({prior.mean, prior.cov}, obs, y);
    CHECK(max_abs(post.mean - expected.mean) < 1e-8);
    CHECK(max_abs(post.cov - expected.cov) < 1e-8);
    CHECK(post.cov == post.cov.transpose());
  }
}

TEST_CASE("whole linear trajectories match the Kalman filter") {
  RngStream rng(56);
  const auto lin = random_linear(4, 2, rng);
  const StateSpaceModel model = linear_model(lin);
  const oracle::KalmanState init{VectorXd::Constant(4, 0.5), random_spd(4, rng)};

  std::vector<VectorXd> ys;
  VectorXd x = init.mean;
  const MatrixXd lq = lin.q.llt().matrixL();
  const MatrixXd lr = lin.r.llt().matrixL();
  for (int k = 0; k < 100; ++k) {
    x = lin.a * x + lq * random_matrix(4, 1, rng);
    ys.push_back(lin.c * x + lr * random_matrix(2, 1, rng));
  }
  const auto expected = oracle::kalman_filter(lin, init, ys);
  for (const auto& s : all_schemes()) {
    const auto got = run_filter(model, s, ys, {init.mean, init.cov}, rng);
    REQUIRE(got.size() == expected.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
      worst = std::max({worst, max_abs(got[k].mean - expected[k].mean), max_abs(got[k].cov - expected[k].cov)});
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("near-noiseless observations are tracked") {
  RngStream rng(57);
  const StateSpaceModel model{[](const VectorXd& x) { return x; }, [](const VectorXd& x) { return x; },
                              MatrixXd::Identity(2, 2), 1e-10 * MatrixXd::Identity(2, 2)};
  std::vector<VectorXd> ys;
  for (int k = 0; k < 30; ++k) ys.push_back(random_matrix(2, 1, rng) * 5.0);
  for (const auto& s : all_schemes()) {
    const auto post = run_filter(model, s, ys, {VectorXd::Zero(2), MatrixXd::Identity(2, 2)}, rng);
    for (std::size_t k = 0; k < ys.size(); ++k) CHECK(max_abs(post[k].mean - ys[k]) < 1e-6);
  }
}

TEST_CASE("posterior covariances stay symmetric positive semidefinite") {
  RngStream rng(58);
  const StateSpaceModel model{[](const VectorXd& x) { return VectorXd(0.9 * x + 0.2 * x.array().sin().matrix()); },
                              [](const VectorXd& x) { return VectorXd::Constant(1, x.squaredNorm()); },
                              MatrixXd::Identity(3, 3), MatrixXd::Constant(1, 1, 1.0)};
  std::vector<VectorXd> ys;
  for (int k = 0; k < 50; ++k) ys.push_back(VectorXd::Constant(1, 3.0 + rng.normal()));
  for (const auto& s : all_schemes()) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<GaussianBelief> post;
      try {
        post = run_filter(model, s, ys, {VectorXd::Ones(3), MatrixXd::Identity(3, 3)}, rng);
      } catch (const DivergenceError&) {
        // Rules with a negative center weight may legitimately break down
        // here; positive-weight rules must not.
        CHECK_FALSE(s.deterministic());
        continue;
      }
      for (const auto& b : post) {
        CHECK(b.cov == b.cov.transpose());
        CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(b.cov).eigenvalues().minCoeff() > -1e-9);
        CHECK(b.cov.allFinite());
      }
    }
  }
}

TEST_CASE("an indefinite innovation estimate still yields a gain") {
  const GaussianBelief pred{VectorXd::Zero(2), MatrixXd::Identity(2, 2)};
  const PredictedObservation obs{VectorXd::Zero(1), (MatrixXd(2, 1) << 1.0, 0.0).finished(),
                                 MatrixXd::Constant(1, 1, -2.0)};
  const GaussianBelief post = correct(pred, obs, VectorXd::Constant(1, 2.0));
  CHECK(post.mean(0) == doctest::Approx(-1.0));
  CHECK(post.cov(0, 0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(correct(pred, {VectorXd::Zero(1), MatrixXd::Zero(2, 1), MatrixXd::Zero(1, 1)},
                          VectorXd::Zero(1)),
                  DivergenceError);
}

TEST_CASE("filter runs are bit-identical for a fixed seed") {
  GrowthModel growth;
  RngStream sim(59);
  const Trajectory t = simulate_trajectory(growth, 40, sim);
  RngStream a(60);
  RngStream b(60);
  const auto ra = run_filter(growth.model(), IntegrationScheme::sif5(10), t.observations, growth.initial_belief(), a);
  const auto rb = run_filter(growth.model(), IntegrationScheme::sif5(10), t.observations, growth.initial_belief(), b);
  REQUIRE(ra.size() == 40);
  for (std::size_t k = 0; k < ra.size(); ++k) {
    CHECK(ra[k].mean == rb[k].mean);
    CHECK(ra[k].cov == rb[k].cov);
  }
}

TEST_CASE("divergence is reported with its step") {
  RngStream rng(60);
  const StateSpaceModel model{[](const VectorXd& x) { return VectorXd(x.array().exp()); },
                              [](const VectorXd& x) { return x; }, MatrixXd::Identity(1, 1),
                              MatrixXd::Identity(1, 1)};
  std::vector<VectorXd> ys(10, VectorXd::Constant(1, 1e300));
  try {
    run_filter(model, IntegrationScheme::ckf3(), ys, {VectorXd::Constant(1, 1.0), MatrixXd::Identity(1, 1)}, rng);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.step() >= 0);
    CHECK(e.step() < 10);
  }
}

TEST_CASE("malformed inputs") {
  RngStream rng(61);
  const StateSpaceModel model{[](const VectorXd& x) { return x; }, [](const VectorXd& x) { return x; },
                              MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2)};
  const GaussianBelief init{VectorXd::Zero(2), MatrixXd::Identity(2, 2)};
  CHECK_THROWS_AS(run_filter(model, IntegrationScheme::ckf3(), std::vector<VectorXd>{}, init, rng),
                  std::invalid_argument);
  StateSpaceModel no_h = model;
  no_h.h = nullptr;
  CHECK_THROWS_AS(no_h.validate(), std::invalid_argument);
}
