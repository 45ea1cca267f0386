#include "srcf/bench.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "parallel.hpp"
#include "srcf/error.hpp"
#include "srcf/linalg.hpp"

namespace srcf {
namespace {

// Top-level substream ids.
constexpr std::uint64_t kIntegralStream = 1;
constexpr std::uint64_t kTrajectoryStream = 2;
constexpr std::uint64_t kFilterStream = 3;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t kind_index(SchemeKind kind) { return static_cast<std::uint64_t>(kind); }

// Published mean relative errors (percent) for E[sum_i x_i^i], n = 6.
std::optional<double> reference_mean_pct(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kCkf3:
      return 104.0521;
    case SchemeKind::kCkf5:
      return 57.89;
    case SchemeKind::kSif3:
      return 13.92;
    case SchemeKind::kSif5:
      return 6.43;
    case SchemeKind::kQsif5:
      return 15.89;
    case SchemeKind::kMc:
      return 18.33;
  }
  return std::nullopt;
}

bool agrees_with_reference(const IntegrationScheme& scheme, double computed, double reference) {
  if (scheme.deterministic()) return std::abs(computed - reference) <= 1e-3;
  return computed >= 0.55 * reference && computed <= 1.45 * reference;
}

}  // namespace

double true_integral_sum_powers(Index n) {
  if (n < 1) throw std::invalid_argument("true_integral_sum_powers: n must be >= 1");
  double total = 0.0;
  for (Index p = 2; p <= n; p += 2) {
    double dfact = 1.0;
    for (Index k = p - 1; k > 1; k -= 2) dfact *= static_cast<double>(k);
    total += dfact;
  }
  return total;
}

double g_sum_powers(const VectorXd& x) {
  double total = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    double term = 1.0;
    for (Index e = 0; e <= i; ++e) term *= x(i);
    total += term;
  }
  return total;
}

IntegralProblem IntegralProblem::sum_powers(Index n) {
  return {"sum_powers", g_sum_powers, true_integral_sum_powers(n)};
}

IntegralBenchReport run_integral_bench(Index n, std::span<const IntegrationScheme> schemes, int runs,
                                       const RngStream& rng, const IntegralProblem& problem, int workers) {
  if (runs < 1) throw std::invalid_argument("run_integral_bench: runs must be >= 1");
  if (!problem.g) throw std::invalid_argument("run_integral_bench: missing integrand");

  IntegralBenchReport report;
  report.n = n;
  report.runs = runs;
  report.seed = rng.seed();
  report.integrand = problem.name;
  report.truth = problem.truth;

  const GaussianBelief standard{VectorXd::Zero(n), MatrixXd::Identity(n, n)};
  const Integrand integrand = Integrand::scalar(problem.g);
  const double scale = problem.truth != 0.0 ? std::abs(problem.truth) : 1.0;
  const RngStream root = rng.substream(kIntegralStream);

  for (const IntegrationScheme& scheme : schemes) {
    scheme.validate(n);
    const int scheme_runs = scheme.deterministic() ? 1 : runs;
    const RngStream scheme_root = root.substream(kind_index(scheme.kind));
    std::vector<double> errors(static_cast<std::size_t>(scheme_runs));

    detail::parallel_for(errors.size(), workers, [&](std::size_t r) {
      RngStream stream = scheme_root.substream(r);
      const double estimate = expect(integrand, standard, scheme, stream)(0);
      errors[r] = std::abs(problem.truth - estimate) / scale;
    });

    IntegralBenchRow row;
    row.scheme = scheme;
    row.n_m = scheme.effective_repetitions();
    row.points = evaluations_per_estimate(scheme, n);
    row.symmetric_nodes = static_cast<std::size_t>(row.n_m) * symmetric_nodes_per_draw(scheme, n);
    double sum = 0.0;
    for (double e : errors) {
      sum += e;
      row.re_max_pct = std::max(row.re_max_pct, 100.0 * e);
    }
    row.re_mean_pct = 100.0 * sum / static_cast<double>(errors.size());
    if (problem.name == "sum_powers" && n == 6) {
      row.reference_re_mean_pct = reference_mean_pct(scheme.kind);
      if (row.reference_re_mean_pct) {
        row.matches_reference = agrees_with_reference(scheme, row.re_mean_pct, *row.reference_re_mean_pct);
      }
    }
    report.rows.push_back(row);
  }
  return report;
}

StateSpaceModel GrowthModel::model() const {
  if (q < 1 || n < 1) throw std::invalid_argument("GrowthModel: q and n must be >= 1");
  StateSpaceModel m;
  m.f = [decay = decay](const VectorXd& x) -> VectorXd { return decay * x; };
  m.h = [q = q](const VectorXd& x) -> VectorXd {
    const double z = std::pow(1.0 + x.squaredNorm(), 2);
    return VectorXd::Constant(1, std::pow(z, q));
  };
  m.process_noise = process_var * MatrixXd::Identity(n, n);
  m.observation_noise = MatrixXd::Constant(1, 1, obs_var);
  return m;
}

GaussianBelief GrowthModel::initial_belief() const {
  return {VectorXd::Constant(n, init_mean), init_var * MatrixXd::Identity(n, n)};
}

Trajectory simulate_trajectory(const StateSpaceModel& model, const GaussianBelief& init, int steps,
                               RngStream& rng, double overflow_limit) {
  model.validate();
  init.validate();
  if (steps < 1) throw std::invalid_argument("simulate_trajectory: steps must be >= 1");
  const Index n = model.state_dim();
  const Index m = model.obs_dim();
  if (init.dimension() != n) throw std::invalid_argument("simulate_trajectory: initial dimension mismatch");

  const MatrixXd init_root = spd_sqrt(init.cov);
  const MatrixXd process_root = spd_sqrt(model.process_noise);
  const MatrixXd obs_root = spd_sqrt(model.observation_noise);
  auto gaussian = [&rng](Index dim) {
    VectorXd z(dim);
    for (Index i = 0; i < dim; ++i) z(i) = rng.normal();
    return z;
  };

  constexpr int kMaxResamples = 10;
  Trajectory traj;
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    traj.states.clear();
    traj.observations.clear();
    VectorXd x = init.mean + init_root * gaussian(n);
    bool overflow = false;
    for (int k = 0; k < steps && !overflow; ++k) {
      x = model.f(x) + process_root * gaussian(n);
      VectorXd y = model.h(x) + obs_root * gaussian(m);
      overflow = !y.allFinite() || y.cwiseAbs().maxCoeff() > overflow_limit;
      traj.states.push_back(x);
      traj.observations.push_back(std::move(y));
    }
    if (!overflow) return traj;
    ++traj.resamples;
  }
  throw Error("simulate_trajectory: observations overflowed on " + std::to_string(kMaxResamples + 1) +
              " consecutive trajectories");
}

FilterBenchReport run_filter_bench(const StateSpaceModel& model, const GaussianBelief& init,
                                   std::span<const IntegrationScheme> schemes, int n_mc, int steps,
                                   const RngStream& rng, int workers) {
  if (n_mc < 1) throw std::invalid_argument("run_filter_bench: N_MC must be >= 1");
  if (steps < 1) throw std::invalid_argument("run_filter_bench: steps must be >= 1");
  model.validate();
  for (const auto& scheme : schemes) scheme.validate(model.state_dim());

  FilterBenchReport report;
  report.model = "custom";
  report.n = model.state_dim();
  report.steps = steps;
  report.n_mc = n_mc;
  report.steady_from = steady_state_start(steps);
  report.seed = rng.seed();

  const auto runs = static_cast<std::size_t>(n_mc);
  const auto k_steps = static_cast<std::size_t>(steps);
  std::vector<Trajectory> trajectories(runs);
  const RngStream traj_root = rng.substream(kTrajectoryStream);
  detail::parallel_for(runs, workers, [&](std::size_t m) {
    RngStream stream = traj_root.substream(m);
    trajectories[m] = simulate_trajectory(model, init, steps, stream);
  });
  for (const auto& t : trajectories) report.trajectory_resamples += t.resamples;

  const RngStream filter_root = rng.substream(kFilterStream);
  for (const IntegrationScheme& scheme : schemes) {
    const RngStream scheme_root = filter_root.substream(kind_index(scheme.kind));
    // sq_err[m][k] = ||x_hat_k - x_k||^2, empty if run m diverged.
    std::vector<std::vector<double>> sq_err(runs);
    detail::parallel_for(runs, workers, [&](std::size_t m) {
      RngStream stream = scheme_root.substream(m);
      try {
        const auto posteriors = run_filter(model, scheme, trajectories[m].observations, init, stream);
        std::vector<double> errs(k_steps);
        for (std::size_t k = 0; k < k_steps; ++k) {
          errs[k] = (posteriors[k].mean - trajectories[m].states[k]).squaredNorm();
        }
        sq_err[m] = std::move(errs);
      } catch (const DivergenceError&) {
        sq_err[m].clear();
      }
    });

    RmseSeries series;
    series.scheme = scheme;
    series.rmse.assign(k_steps, 0.0);
    series.run_steady_mse.assign(runs, kNaN);
    for (std::size_t m = 0; m < runs; ++m) {
      if (sq_err[m].empty()) {
        ++series.excluded;
        continue;
      }
      ++series.runs_used;
      double steady = 0.0;
      for (std::size_t k = 0; k < k_steps; ++k) {
        series.rmse[k] += sq_err[m][k];
        if (k >= static_cast<std::size_t>(report.steady_from)) steady += sq_err[m][k];
      }
      series.run_steady_mse[m] = steady / static_cast<double>(steps - report.steady_from);
    }
    for (double& v : series.rmse) {
      v = series.runs_used > 0 ? std::sqrt(v / series.runs_used) : kNaN;
    }
    report.series.push_back(std::move(series));
  }
  return report;
}

FilterBenchReport run_filter_bench(const GrowthModel& growth, std::span<const IntegrationScheme> schemes,
                                   int n_mc, int steps, const RngStream& rng, int workers) {
  FilterBenchReport report =
      run_filter_bench(growth.model(), growth.initial_belief(), schemes, n_mc, steps, rng, workers);
  report.model = "growth";
  report.q = growth.q;
  return report;
}

}  // namespace srcf
