#pragma once

#include <functional>
#include <string>
#include <vector>

#include "htsgd/core/problem.hpp"
#include "htsgd/harness/config.hpp"
#include "htsgd/harness/csv.hpp"
#include "htsgd/harness/plot.hpp"
#include "htsgd/harness/statistics.hpp"
#include "htsgd/optimizers/schedules.hpp"
#include "htsgd/optimizers/trajectory.hpp"

namespace htsgd {

/// Instance described by the problem.* keys. Some kinds depend on the step
/// schedule and horizon (hp_hard, small_step), hence the full config.
ProblemInstance build_problem(const ExperimentConfig& cfg);
StepSchedule build_schedule(const ExperimentConfig& cfg, const ProblemInstance& problem);
ClipSchedule build_clip(const ExperimentConfig& cfg, const ProblemInstance& problem);

/// One optimizer run with the configured method.
Trajectory run_configured(const ExperimentConfig& cfg, const ProblemInstance& problem,
                          const StepSchedule& schedule, RandomStream& rng);

struct SeriesStats {
  std::string label;  // "<output>:<criterion>"
  std::vector<Summary> stats;  // one per t in the grid
};

struct RunEnsemble {
  std::string experiment_id;
  long configured_runs = 0;
  long completed_runs = 0;
  long aborted_runs = 0;
  std::vector<long> t_grid;           // prefix lengths at which outputs were measured
  std::vector<SeriesStats> series;
  /// per_run[s][k][i]: series s, completed run k, grid index i
  std::vector<std::vector<std::vector<double>>> per_run;
  /// First index t with criterion <= hitting.threshold, censored at T + 1.
  std::vector<double> hitting_times;
  long censored = 0;
};

/// Executes cfg.runs runs (stream id = seed + run index) on up to cfg.threads
/// threads and aggregates them in run order.
RunEnsemble run_experiment(const ExperimentConfig& cfg);

/// Same over an already built problem, used by sweeps and tests.
RunEnsemble run_ensemble(const ExperimentConfig& cfg, const ProblemInstance& problem);

CsvTable ensemble_table(const RunEnsemble& ensemble, const std::string& label_prefix = "");

struct SweepPoint {
  std::string value;
  RunEnsemble ensemble;
};

struct SweepResult {
  std::string param;
  std::vector<SweepPoint> points;
};

SweepResult run_sweep(const ExperimentConfig& cfg);

/// Final-horizon statistics per sweep value, plus hitting-time rows when a
/// threshold is configured.
CsvTable sweep_table(const ExperimentConfig& cfg, const SweepResult& sweep);

/// Executes `tasks` indices [0, n) on `threads` workers; the callable must
/// only write to its own slot.
void parallel_for(long n, int threads, const std::function<void(long)>& task);

/// Files written by `run`/`sweep`: CSV, sidecar .meta with the resolved
/// config, and an SVG plot. Returns the paths written.
std::vector<std::string> run_and_emit(const ExperimentConfig& cfg, const std::string& out_dir);
std::vector<std::string> sweep_and_emit(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace htsgd
