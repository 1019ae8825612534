#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "htsgd/harness/csv.hpp"
#include "htsgd/optimizers/output.hpp"
#include "htsgd/problems/hard_instances.hpp"

namespace htsgd {

// ---------------------------------------------------------------------------
// Convex high-probability instance.

struct HPConvexParams {
  double delta = 0.125;
  double alpha = 2.0;
  long T = 2;
  double eta = 1.0;
  double r = 0.0;  // eta_t = eta * t^(-r)
  double x1 = -1.0;
  OutputStrategy output = OutputStrategy::last;
  long runs = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct HPConvexReport {
  HPConvexParams params;
  double a = 0.0;
  double L = 0.0;
  double threshold = 0.0;  // a * |x1 - x*|
  long events = 0;
  double frequency = 0.0;
  /// Binomial standard error sqrt(delta (1 - delta) / runs) under frequency = delta.
  double standard_error = 0.0;
  /// frequency >= delta - 3 standard errors
  bool consistent = false;
};

/// Event frequency of {F(x_out) - F* >= a |x_1 - x*|} over seeded runs. The
/// cone coefficients follow the output: plain average for simple_average, the
/// step sizes themselves otherwise.
HPConvexReport hp_convex_demo(const HPConvexParams& params);

// ---------------------------------------------------------------------------
// Deterministic small-step instance.

struct SmallStepParams {
  double eps = 0.5;
  double Delta1 = 10.0;
  double L = 1.0;
  double nu = 2.0;
  double eta = 0.01;
  double r = 0.0;
  long max_iterations = 100000000;
};

struct SmallStepReport {
  SmallStepParams params;
  long ramp_index = 0;      // index of the last ramp kink
  long first_hit = 0;       // first T with |F'(x_T)| <= eps
  double step_sum = 0.0;    // sum of eta_t for t < first_hit
  double bound_quarter = 0.0;  // Delta1 / (4 eps^2)
  double bound_eighth = 0.0;   // Delta1 / (8 eps^2)
  bool exceeds_quarter = false;
  bool exceeds_eighth = false;
};

/// Runs exact-gradient SGD from 0 until the first eps-stationary iterate.
/// Throws ParameterError when the instance is degenerate.
SmallStepReport small_step_demo(const SmallStepParams& params);

// ---------------------------------------------------------------------------
// Step-adversarial instance.

struct LargeStepParams {
  LargeStepHardInstance instance;
  double Delta1 = 1.0;
  int dim = 3;
  long T = 200;
  double eta = 1.0;
  double r = 0.5;
  long runs = 10000;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct LargeStepRun {
  double min_norm = 0.0;       // min over x_1..x_{T+1}
  double bound = 0.0;          // min{||x_1||, min_t tau_t}
  double min_grad_norm = 0.0;  // min over t <= T of ||grad F(x_t)||
  bool respected = false;
};

struct LargeStepReport {
  LargeStepParams params;
  std::vector<LargeStepRun> runs;
  long violations = 0;
  long aborted = 0;
  double min_tau = 0.0;
  double worst_margin = 0.0;  // min over runs of min_norm - bound
  double min_grad_norm = 0.0;
};

LargeStepReport large_step_demo(const LargeStepParams& params);

// ---------------------------------------------------------------------------
// Text-keyed entry point for the command line.

struct LowerBoundOutput {
  CsvTable table;
  std::string summary;
  bool ok = true;
};

/// kind is hp_convex, small_step or large_step; params are key=value pairs
/// overriding the defaults above. Unknown keys raise ConfigError.
LowerBoundOutput lower_bound_demo(const std::string& kind,
                                  const std::map<std::string, std::string>& params);

}  // namespace htsgd
