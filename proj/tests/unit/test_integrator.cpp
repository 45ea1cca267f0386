#include <doctest.h>

#include <atomic>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oracles/stats.hpp"
#include "srcf/error.hpp"
#include "srcf/integrator.hpp"
#include "srcf/log.hpp"

using namespace srcf;

namespace {

std::vector<IntegrationScheme> all_schemes() {
  return {IntegrationScheme::ckf3(),  IntegrationScheme::ckf5(),  IntegrationScheme::sif3(4),
          IntegrationScheme::sif5(3), IntegrationScheme::qsif5(3), IntegrationScheme::mc(40, 2)};
}

GaussianBelief random_belief(Index n, RngStream& rng) {
  MatrixXd a(n, n);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
  VectorXd mean(n);
  for (Index i = 0; i < n; ++i) mean(i) = 3.0 * rng.normal();
  MatrixXd cov = a * a.transpose() + 0.1 * MatrixXd::Identity(n, n);
  return {mean, 0.5 * (cov + cov.transpose())};
}

const Integrand kIdentity4 = Integrand::pointwise([](const VectorXd& x) { return x; }, 4);

}  // namespace

TEST_CASE("belief validation") {
  CHECK_NOTHROW((GaussianBelief{VectorXd::Zero(2), MatrixXd::Identity(2, 2)}.validate()));
  CHECK_THROWS_AS((GaussianBelief{VectorXd::Zero(2), MatrixXd::Identity(3, 3)}.validate()),
                  std::invalid_argument);
  MatrixXd asym = MatrixXd::Identity(2, 2);
  asym(0, 1) = 0.5;
  CHECK_THROWS_AS((GaussianBelief{VectorXd::Zero(2), asym}.validate()), std::invalid_argument);
  VectorXd bad = VectorXd::Zero(2);
  bad(1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS((GaussianBelief{bad, MatrixXd::Identity(2, 2)}.validate()), std::invalid_argument);
}

TEST_CASE("integrand shapes") {
  const Integrand m = Integrand::matrix([](const VectorXd& x) { return MatrixXd(x * x.transpose()); }, 2, 2);
  MatrixXd pts(2, 1);
  pts << 1.0, 2.0;
  const MatrixXd out = m(pts);
  REQUIRE(out.rows() == 4);
  CHECK(unflatten(out.col(0), 2, 2) == (MatrixXd(2, 2) << 1, 2, 2, 4).finished());
  const Integrand wrong([](const MatrixXd& p) { return MatrixXd::Zero(3, p.cols()); }, 2);
  CHECK_THROWS_AS(wrong(pts), std::invalid_argument);
}

TEST_CASE("pairwise sum") {
  std::vector<VectorXd> terms;
  for (int i = 1; i <= 7; ++i) terms.push_back(VectorXd::Constant(2, i));
  CHECK(pairwise_sum(terms) == VectorXd::Constant(2, 28.0));
}

TEST_CASE("first moment is exact for every scheme and draw") {
  RngStream rng(31);
  for (const auto& s : all_schemes()) {
    if (s.kind == SchemeKind::kMc) continue;
    for (int i = 0; i < 20; ++i) {
      const GaussianBelief b = random_belief(4, rng);
      const VectorXd m = expect(kIdentity4, b, s, rng);
      CHECK((m - b.mean).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + b.mean.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("second moment of a standard normal per SIF5 draw") {
  RngStream rng(32);
  const Integrand xx = Integrand::matrix([](const VectorXd& x) { return MatrixXd(x * x.transpose()); }, 5, 5);
  const GaussianBelief b{VectorXd::Zero(5), MatrixXd::Identity(5, 5)};
  for (int i = 0; i < 50; ++i) {
    const MatrixXd m = unflatten(expect(xx, b, IntegrationScheme::sif5(1), rng), 5, 5);
    CHECK((m - MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("cubature estimate of the sum-of-powers integral") {
  RngStream rng(0);
  const Integrand g = Integrand::scalar([](const VectorXd& x) {
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) s += std::pow(x(i), static_cast<double>(i + 1));
    return s;
  });
  const GaussianBelief b{VectorXd::Zero(6), MatrixXd::Identity(6, 6)};
  // Points +/-sqrt(6) e_i: odd powers cancel, x_i^i averages to 6^(i/2) / 6.
  const double expected = (6.0 + 36.0 + 216.0) / 6.0;
  CHECK(expect(g, b, IntegrationScheme::ckf3(), rng)(0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == 43.0);
}

TEST_CASE("every distinct point is evaluated exactly once") {
  RngStream rng(33);
  for (const auto& s : all_schemes()) {
    std::atomic<long> evaluations{0};
    const Integrand counting(
        [&](const MatrixXd& p) {
          evaluations += p.cols();
          return MatrixXd(p.row(0));
        },
        1);
    expect(counting, random_belief(3, rng), s, rng);
    CHECK(static_cast<std::size_t>(evaluations.load()) == evaluations_per_estimate(s, 3));
  }
}

TEST_CASE("non-finite integrand values are reported") {
  RngStream rng(34);
  const Integrand bad = Integrand::scalar([](const VectorXd& x) {
    return x(0) > 0.5 ? std::numeric_limits<double>::infinity() : 1.0;
  });
  const GaussianBelief b{VectorXd::Zero(2), MatrixXd::Identity(2, 2)};
  try {
    expect(bad, b, IntegrationScheme::sif5(2), rng);
    FAIL("expected NonFiniteIntegrand");
  } catch (const NonFiniteIntegrand& e) {
    CHECK(std::string(e.what()).find("point") != std::string::npos);
  }
}

TEST_CASE("batch of one function matches expect") {
  for (const auto& s : all_schemes()) {
    RngStream a(35);
    RngStream b(35);
    const GaussianBelief belief = random_belief(4, a);
    random_belief(4, b);
    const VectorXd single = expect(kIdentity4, belief, s, a);
    const auto batch = expect_batch(std::span<const Integrand>(&kIdentity4, 1), belief, s, b);
    CHECK(single == batch.at(0));
  }
}

TEST_CASE("shared draws keep the implied covariance positive semidefinite") {
  RngStream rng(36);
  for (const auto& s : all_schemes()) {
    for (int trial = 0; trial < 20; ++trial) {
      MatrixXd a(3, 4);
      for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
      const Integrand f1 = Integrand::pointwise([a](const VectorXd& x) { return VectorXd(a * x); }, 3);
      const Integrand f2 = Integrand::matrix(
          [a](const VectorXd& x) {
            const VectorXd y = a * x;
            return MatrixXd(y * y.transpose());
          },
          3, 3);
      const std::vector<Integrand> fns{f1, f2};
      const auto r = expect_batch(fns, random_belief(4, rng), s, rng);
      const MatrixXd p = unflatten(r[1], 3, 3) - r[0] * r[0].transpose();
      const MatrixXd ps = 0.5 * (p + p.transpose());
      const double scale = ps.cwiseAbs().maxCoeff();
      CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(ps).eigenvalues().minCoeff() >= -1e-9 * scale);
    }
  }
}

TEST_CASE("estimates are reproducible from the stream state") {
  const auto run = [] {
    RngStream rng(37);
    const GaussianBelief b = random_belief(3, rng);
    const Integrand g = Integrand::scalar([](const VectorXd& x) { return std::exp(0.1 * x.sum()); });
    return expect(g, b, IntegrationScheme::sif5(7), rng)(0);
  };
  CHECK(run() == run());
}

TEST_CASE("repetitions on a deterministic rule warn once per call") {
  std::vector<std::string> seen;
  set_warning_sink([&](std::string_view m) { seen.emplace_back(m); });
  RngStream rng(38);
  expect(kIdentity4, random_belief(4, rng), IntegrationScheme{SchemeKind::kCkf3, 5, 0}, rng);
  set_warning_sink(nullptr);
  CHECK(seen.size() == 1);
}

TEST_CASE("Monte-Carlo error shrinks like one over root N") {
  const Integrand g = Integrand::scalar([](const VectorXd& x) { return x(0) * x(0) + x(1); });
  const GaussianBelief b{VectorXd::Zero(2), MatrixXd::Identity(2, 2)};
  std::vector<double> log_n;
  std::vector<double> log_rmse;
  RngStream rng(39);
  for (int samples : {16, 64, 256, 1024, 4096}) {
    double ss = 0.0;
    const int trials = 400;
    for (int t = 0; t < trials; ++t) {
      const double e = expect(g, b, IntegrationScheme::mc(samples), rng)(0) - 1.0;
      ss += e * e;
    }
    log_n.push_back(std::log(samples));
    log_rmse.push_back(0.5 * std::log(ss / trials));
  }
  const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / log_n.size();
  const double my = std::accumulate(log_rmse.begin(), log_rmse.end(), 0.0) / log_rmse.size();
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxy += (log_n[i] - mx) * (log_rmse[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  CHECK(std::abs(sxy / sxx + 0.5) < 0.1);
}

TEST_CASE("stochastic fifth-degree estimates are unbiased beyond degree five") {
  const Integrand g = Integrand::scalar([](const VectorXd& x) { return std::cos(x(0)) + x(1) * x(1) * x(1) * x(1) * x(1) * x(1); });
  const GaussianBelief b{VectorXd::Zero(2), MatrixXd::Identity(2, 2)};
  const double truth = std::exp(-0.5) + 15.0;
  RngStream rng(40);
  std::vector<double> values;
  for (int i = 0; i < 20000; ++i) values.push_back(expect(g, b, IntegrationScheme::sif5(1), rng)(0));
  const auto [mean, se] = oracle::mean_se(values);
  CHECK(std::abs(mean - truth) < 4.0 * se);
}
