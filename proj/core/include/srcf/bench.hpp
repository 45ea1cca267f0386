#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srcf/filter.hpp"
#include "srcf/integrator.hpp"
#include "srcf/rules.hpp"

namespace srcf {

// ---------------------------------------------------------------------------
// Integral benchmark: E[g(x)], x ~ N(0, I_n).

/// sum_{p <= n, p even} (p - 1)!!, the exact value of E[sum_i x_i^i].
double true_integral_sum_powers(Index n);

/// sum_i x_i^i (1-based exponent).
double g_sum_powers(const VectorXd& x);

struct IntegralProblem {
  std::string name;
  std::function<double(const VectorXd&)> g;
  double truth = 0.0;

  static IntegralProblem sum_powers(Index n);
};

struct IntegralBenchRow {
  IntegrationScheme scheme;
  double re_max_pct = 0.0;
  double re_mean_pct = 0.0;
  int n_m = 1;
  /// Distinct integrand evaluations behind one estimate.
  std::size_t points = 0;
  /// Same budget with each +/- pair counted once.
  std::size_t symmetric_nodes = 0;
  /// Published mean relative error for this rule, when one exists for the
  /// configured problem, and whether the computed mean agrees with it.
  std::optional<double> reference_re_mean_pct;
  bool matches_reference = true;
};

struct IntegralBenchReport {
  Index n = 0;
  int runs = 0;
  std::uint64_t seed = 0;
  std::string integrand;
  double truth = 0.0;
  std::vector<IntegralBenchRow> rows;
};

/// Runs `runs` independent estimates per stochastic scheme (one for
/// deterministic schemes) and reports relative errors |truth - I| / |truth| in
/// percent. Run r of scheme s uses substream (kind(s), r) of `rng`, so results
/// do not depend on `workers` or on which other schemes are listed.
IntegralBenchReport run_integral_bench(Index n, std::span<const IntegrationScheme> schemes,
                                       int runs, const RngStream& rng,
                                       const IntegralProblem& problem, int workers = 1);

inline IntegralBenchReport run_integral_bench(Index n, std::span<const IntegrationScheme> schemes,
                                              int runs, const RngStream& rng, int workers = 1) {
  return run_integral_bench(n, schemes, runs, rng, IntegralProblem::sum_powers(n), workers);
}

// ---------------------------------------------------------------------------
// Filtering benchmark.

/// x_k = 0.9 x_{k-1} + w_k,  y_k = ((1 + x_k^T x_k)^2)^q + v_k,
/// with x_0 ~ N(1, 10 I), Q = 100 I, R = 10 by default.
struct GrowthModel {
  int q = 2;
  Index n = 10;
  double decay = 0.9;
  double process_var = 100.0;
  double obs_var = 10.0;
  double init_mean = 1.0;
  double init_var = 10.0;

  StateSpaceModel model() const;
  GaussianBelief initial_belief() const;
};

struct Trajectory {
  std::vector<VectorXd> states;        // x_1..x_K
  std::vector<VectorXd> observations;  // y_1..y_K
  int resamples = 0;                   // trajectories discarded for overflow
};

/// Samples x_0 ~ init, then K steps of the model with fresh noise. A
/// trajectory with any |y| above `overflow_limit` (or non-finite) is discarded
/// and redrawn, at most 10 times; throws srcf::Error after that.
Trajectory simulate_trajectory(const StateSpaceModel& model, const GaussianBelief& init, int steps,
                               RngStream& rng, double overflow_limit = 1e280);

inline Trajectory simulate_trajectory(const GrowthModel& growth, int steps, RngStream& rng) {
  return simulate_trajectory(growth.model(), growth.initial_belief(), steps, rng);
}

struct RmseSeries {
  IntegrationScheme scheme;
  std::vector<double> rmse;  // one value per step
  int runs_used = 0;
  int excluded = 0;  // runs that raised DivergenceError
  /// Per-run mean of ||x_hat - x||^2 over the steady-state window; NaN for
  /// excluded runs. Indexed like the trajectory set, so schemes pair up.
  std::vector<double> run_steady_mse;
};

struct FilterBenchReport {
  std::string model;
  Index n = 0;
  int q = 0;
  int steps = 0;
  int n_mc = 0;
  int steady_from = 0;  // first step of the steady-state window
  std::uint64_t seed = 0;
  int trajectory_resamples = 0;
  std::vector<RmseSeries> series;
};

/// Start of the steady-state window used for time averages: the second half.
inline int steady_state_start(int steps) { return steps / 2; }

/// Simulates `n_mc` trajectories once (common random numbers) and filters
/// every trajectory with every scheme. RMSE_k = sqrt(mean over runs of
/// ||x_hat_k - x_k||^2), over runs that did not diverge.
FilterBenchReport run_filter_bench(const StateSpaceModel& model, const GaussianBelief& init,
                                   std::span<const IntegrationScheme> schemes, int n_mc,
                                   int steps, const RngStream& rng, int workers = 1);

FilterBenchReport run_filter_bench(const GrowthModel& growth,
                                   std::span<const IntegrationScheme> schemes, int n_mc,
                                   int steps, const RngStream& rng, int workers = 1);

}  // namespace srcf
