#pragma once

#include <vector>

#include "htsgd/core/problem.hpp"
#include "htsgd/noise/noise.hpp"

namespace htsgd {

// ---------------------------------------------------------------------------
// One-dimensional convex instance for the high-probability lower bound.

struct HPHardInstance {
  double a = 1.0;
  double L = 1.0;
  double alpha = 2.0;
};

struct HPParameters {
  double a;
  double L;
};

/// Slope and curvature for cone coefficients `gammas` and failure level delta.
HPParameters hp_hard_parameters(const std::vector<double>& gammas, double alpha, double delta);

/// Cone coefficients of last-iterate SGD: gamma_t = eta_t for t = 1..T.
std::vector<double> last_iterate_cone(const std::vector<double>& steps);
/// Cone coefficients of the plain average of x_1..x_T:
/// gamma_k = eta_k (T - k) / T.
std::vector<double> average_cone(const std::vector<double>& steps);

double hp_hard_objective(const HPHardInstance& inst, double x);
double hp_hard_derivative(const HPHardInstance& inst, double x);
/// Derivative plus one stable draw (two uniforms).
double hp_hard_gradient(const HPHardInstance& inst, double x, RandomStream& rng);
/// Same with the noise value supplied.
double hp_hard_gradient_with_noise(const HPHardInstance& inst, double x, double xi);

/// Minimizer a/L (left end of the flat piece) and optimal value -a^2/(2L).
double hp_hard_minimizer(const HPHardInstance& inst);
double hp_hard_optimal_value(const HPHardInstance& inst);

ProblemInstance make_hp_hard(const HPHardInstance& inst, double x1 = -1.0);

// ---------------------------------------------------------------------------
// Deterministic instance punishing small steps.

struct SmallStepHardInstance {
  double eps = 0.5;
  double Delta1 = 10.0;
  double L_nu = 1.0;
  double nu = 2.0;
  /// Ramp end y_{T*} and the index T* itself.
  double ramp_end = 0.0;
  long T_star = 1;
  /// Width of the curved piece, (2 eps / L)^(1/(nu-1)).
  double width = 0.0;
};

bool small_step_admissible(double eps, double Delta1, double L_nu, double nu);

/// Places the ramp end using the step sequence. `steps[t-1]` is eta_t. The
/// sequence must be long enough that the ramp condition fails at its end;
/// `step_fn` overload extends it on demand. Throws ParameterError when the
/// non-degeneracy condition fails.
SmallStepHardInstance small_step_instance(double eps, double Delta1, double L_nu, double nu,
                                          const std::function<double(long)>& step_fn,
                                          long max_index = 100000000);

double small_step_objective(const SmallStepHardInstance& inst, double x);
double small_step_derivative(const SmallStepHardInstance& inst, double x);

/// Instance with x_1 = 0 and the exact derivative as oracle.
ProblemInstance make_small_step(const SmallStepHardInstance& inst);

// ---------------------------------------------------------------------------
// Instance with a step-adversarial oracle punishing large steps.

struct LargeStepHardInstance {
  double nu = 2.0;
  double p = 2.0;
  double sigma = 2.0;
  double G = 4.0;
  double L_nu = 1.0;
};

/// Radius of the inner power region and offset of the outer linear piece.
double large_step_radius(const LargeStepHardInstance& inst);
double large_step_offset(const LargeStepHardInstance& inst);
/// Exclusion radius tau for step size eta.
double large_step_tau(const LargeStepHardInstance& inst, double eta);
double large_step_objective(const LargeStepHardInstance& inst, const Vector& z);
Vector large_step_gradient(const LargeStepHardInstance& inst, const Vector& z);

struct LargeStepDecision {
  bool randomized = false;   // two-point noise is active
  double tau_bar = 0.0;
  double g_minus = 0.0;
  double g_plus = 0.0;
  double switch_prob = 0.0;  // probability of returning g_plus
};

/// Case analysis at x for step eta; no randomness consumed.
LargeStepDecision large_step_decide(const LargeStepHardInstance& inst, const Vector& x,
                                    double eta);

/// Adversarial oracle. Always consumes exactly one uniform. Throws
/// ContractViolation at x = 0.
Vector large_step_oracle(const LargeStepHardInstance& inst, const Vector& x, double eta,
                         RandomStream& rng);

/// Starting norm (2^(2-nu) nu Delta1 / L)^(1/nu).
double large_step_start_norm(const LargeStepHardInstance& inst, double Delta1);

/// Instance in dimension d started at large_step_start_norm * e_1.
ProblemInstance make_large_step(const LargeStepHardInstance& inst, int dim, double Delta1);

}  // namespace htsgd
