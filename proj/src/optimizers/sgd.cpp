#include "htsgd/optimizers/sgd.hpp"

#include <cmath>

#include "htsgd/core/errors.hpp"

namespace htsgd {

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::completed: return "completed";
    case RunStatus::diverged: return "diverged";
    case RunStatus::numerical_degeneracy: return "numerical_degeneracy";
  }
  return "unknown";
}

namespace {

StepRecord measure(const ProblemInstance& problem, const Vector& x, long t, double eta,
                   const RunOptions& options) {
  StepRecord rec;
  rec.t = t;
  rec.step = eta;
  rec.x_norm = x.norm();
  if (!options.light_records) {
    rec.F = problem.objective(x);
    rec.grad_norm = problem.gradient(x).norm();
    if (problem.constants.x_star) rec.dist = (x - *problem.constants.x_star).norm();
  }
  return rec;
}

// Shared loop. `direction` returns the vector g_t used in the step and sets
// the clipped flag; `update` maps (x_t, eta_t, g_t) to the candidate next
// iterate or returns false on numerical degeneracy.
template <class Direction, class Update>
Trajectory drive(const ProblemInstance& problem, const StepSchedule& schedule, long T,
                 RandomStream& rng, const RunOptions& options, Direction direction,
                 Update update) {
  require(T >= 1, "optimizer: horizon T must be at least 1");
  Trajectory traj;
  traj.seed = rng.seed();
  traj.stream_id = rng.stream_id();
  traj.iterates.reserve(std::size_t(T) + 1);
  traj.records.reserve(std::size_t(T));

  const Vector& start = options.start ? *options.start : problem.initial_point;
  require(start.size() == problem.dim, "optimizer: starting point has wrong dimension");
  traj.iterates.push_back(problem.feasible.project(start));

  for (long t = 1; t <= T; ++t) {
    const Vector& x = traj.iterates.back();
    const double eta = schedule.at(t);
    StepRecord rec = measure(problem, x, t, eta, options);
    bool clipped = false;
    const Vector g = direction(x, OracleQuery{t, eta}, clipped, traj.oracle_calls);
    rec.clipped = clipped;
    traj.records.push_back(rec);
    if (options.keep_gradients) traj.gradients.push_back(g);

    Vector next;
    if (!update(x, eta, g, next)) {
      traj.status = RunStatus::numerical_degeneracy;
      traj.abort_step = t;
      return traj;
    }
    if (!all_finite(next) || next.norm() > options.divergence_bound) {
      traj.status = RunStatus::diverged;
      traj.abort_step = t;
      return traj;
    }
    traj.iterates.push_back(std::move(next));
  }
  return traj;
}

auto projected_update(const ProblemInstance& problem) {
  return [&problem](const Vector& x, double eta, const Vector& g, Vector& out) {
    out = problem.feasible.project(gradient_step(x, eta, g));
    return true;
  };
}

}  // namespace

Vector minibatch_gradient(const ProblemInstance& problem, const Vector& x, long batch,
                          RandomStream& rng, const OracleQuery& query) {
  require(batch >= 1, "minibatch: batch size must be at least 1");
  Vector mean = problem.oracle(x, rng, query);
  for (long i = 2; i <= batch; ++i) {
    const Vector g = problem.oracle(x, rng, query);
    mean += (g - mean) / double(i);
  }
  return mean;
}

Trajectory run_sgd(const ProblemInstance& problem, const StepSchedule& schedule, long T,
                   RandomStream& rng, const RunOptions& options) {
  auto direction = [&](const Vector& x, const OracleQuery& q, bool&, long& calls) {
    ++calls;
    return problem.oracle(x, rng, q);
  };
  return drive(problem, schedule, T, rng, options, direction, projected_update(problem));
}

Trajectory run_clip_sgd(const ProblemInstance& problem, const StepSchedule& schedule,
                        const ClipSchedule& clip_schedule, long T, RandomStream& rng,
                        const RunOptions& options) {
  auto direction = [&](const Vector& x, const OracleQuery& q, bool& clipped, long& calls) {
    ++calls;
    return clip(problem.oracle(x, rng, q), clip_schedule.at(q.t), &clipped);
  };
  return drive(problem, schedule, T, rng, options, direction, projected_update(problem));
}

Trajectory run_minibatch_sgd(const ProblemInstance& problem, const StepSchedule& schedule,
                             long batch, long T, RandomStream& rng, const RunOptions& options) {
  require(batch >= 1, "run_minibatch_sgd: batch size must be at least 1");
  auto direction = [&](const Vector& x, const OracleQuery& q, bool&, long& calls) {
    calls += batch;
    return minibatch_gradient(problem, x, batch, rng, q);
  };
  return drive(problem, schedule, T, rng, options, direction, projected_update(problem));
}

Trajectory run_psmd(const ProblemInstance& problem, const StepSchedule& schedule, double p,
                    long T, RandomStream& rng, const RunOptions& options) {
  require(problem.feasible.kind() == FeasibleSet::Kind::unconstrained,
          "run_psmd: only defined for unconstrained problems");
  require(p > 1.0 && p <= 2.0, "run_psmd: p must lie in (1, 2]");
  const Vector& start = options.start ? *options.start : problem.initial_point;
  require(start.norm() > 0.0, "run_psmd: starting point must be nonzero");
  const double lift = p / (p - 1.0);
  auto direction = [&](const Vector& x, const OracleQuery& q, bool&, long& calls) {
    ++calls;
    return problem.oracle(x, rng, q);
  };
  auto update = [lift, p](const Vector& x, double eta, const Vector& g, Vector& out) {
    const Vector z = gradient_step(x * std::pow(x.norm(), lift), eta, g);
    const double zn = z.norm();
    if (!(zn >= 1e-12)) return false;
    out = p == 2.0 ? z : Vector(z / std::pow(zn, 2.0 - p));
    return true;
  };
  return drive(problem, schedule, T, rng, options, direction, update);
}

long theoretical_batch_size(double p, double rho, double eta, double sigma, double lambda1,
                            double L, long T) {
  require(p > 1.0 && p <= 2.0, "theoretical_batch_size: p must lie in (1, 2]");
  require(rho > 0.0 && eta > 0.0 && sigma > 0.0 && lambda1 > 0.0 && L > 0.0 && T >= 1,
          "theoretical_batch_size: parameters must be positive");
  const double inner = rho * eta * sigma * sigma * std::pow(double(T), 2.0 / p) / (lambda1 * L);
  const double value = std::pow(inner, p / (2.0 * (p - 1.0)));
  if (value <= 1.0) return 1;
  // absorb rounding noise so that an exact integer is not bumped up by one
  return long(std::ceil(value * (1.0 - 1e-12)));
}

}  // namespace htsgd
