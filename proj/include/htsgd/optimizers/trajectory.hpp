#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htsgd/core/vector.hpp"

namespace htsgd {

enum class RunStatus { completed, diverged, numerical_degeneracy };

std::string to_string(RunStatus status);

/// Measures of the iterate x_t taken with the true objective and gradient
/// before the step at index t.
struct StepRecord {
  long t = 0;
  double F = 0.0;
  double grad_norm = 0.0;
  std::optional<double> dist;  // ||x_t - x*|| when x* is known
  double x_norm = 0.0;
  double step = 0.0;           // eta_t
  bool clipped = false;
};

/// One run. On completion `iterates` holds x_1..x_{T+1} and `records` holds
/// T entries. An aborted run keeps x_1..x_k, where k = abort_step, and k
/// records, so the failing iterate never enters the trajectory.
struct Trajectory {
  std::vector<Vector> iterates;
  std::vector<StepRecord> records;
  /// Oracle outputs actually used in each step (after averaging), only when
  /// RunOptions::keep_gradients is set.
  std::vector<Vector> gradients;
  RunStatus status = RunStatus::completed;
  long abort_step = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  long oracle_calls = 0;

  bool completed() const noexcept { return status == RunStatus::completed; }
  long horizon() const noexcept { return long(records.size()); }
  const Vector& last() const { return iterates.back(); }
};

}  // namespace htsgd
