#pragma once

#include "htsgd/core/problem.hpp"
#include "htsgd/optimizers/schedules.hpp"
#include "htsgd/optimizers/trajectory.hpp"

namespace htsgd {

struct RunOptions {
  /// Abort once ||x_t|| exceeds this bound (or goes non-finite).
  double divergence_bound = 1e12;
  bool keep_gradients = false;
  /// Skip F and grad-norm evaluation in records (t, step, x_norm still set).
  bool light_records = false;
  /// Starting point override; defaults to problem.initial_point.
  std::optional<Vector> start;
};

/// x_{t+1} = Proj(x_t - eta_t g_t) with one oracle call per step. The first
/// iterate is the projection of the starting point.
Trajectory run_sgd(const ProblemInstance& problem, const StepSchedule& schedule, long T,
                   RandomStream& rng, const RunOptions& options = {});

/// Same update with g_t replaced by clip(g_t, lambda_t).
Trajectory run_clip_sgd(const ProblemInstance& problem, const StepSchedule& schedule,
                        const ClipSchedule& clip_schedule, long T, RandomStream& rng,
                        const RunOptions& options = {});

/// g_t is the running mean of B oracle calls at x_t.
Trajectory run_minibatch_sgd(const ProblemInstance& problem, const StepSchedule& schedule,
                             long batch, long T, RandomStream& rng,
                             const RunOptions& options = {});

/// Unconstrained p-th power stochastic mirror step
/// z = x ||x||^(p/(p-1)) - eta g,  x_{t+1} = z / ||z||^(2-p).
/// Aborts with numerical_degeneracy when ||z|| < 1e-12.
Trajectory run_psmd(const ProblemInstance& problem, const StepSchedule& schedule, double p,
                    long T, RandomStream& rng, const RunOptions& options = {});

/// Mean of `batch` oracle calls at x, accumulated as a running mean so that
/// identical draws average to themselves exactly.
Vector minibatch_gradient(const ProblemInstance& problem, const Vector& x, long batch,
                          RandomStream& rng, const OracleQuery& query);

/// Batch size rule ceil(max{1, (rho eta sigma^2 T^(2/p) / (lambda1 L))^(p/(2(p-1)))}).
long theoretical_batch_size(double p, double rho, double eta, double sigma, double lambda1,
                            double L, long T);

}  // namespace htsgd
