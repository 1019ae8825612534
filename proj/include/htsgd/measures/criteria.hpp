#pragma once

#include <string>
#include <vector>

#include "htsgd/core/problem.hpp"
#include "htsgd/measures/envelopes.hpp"
#include "htsgd/optimizers/trajectory.hpp"

namespace htsgd {

struct Criterion {
  enum class Kind { subopt, subopt_pow, dist_pow, grad_sq, grad_pow, stationarity };
  Kind kind = Kind::subopt;
  /// Exponent for subopt_pow (applied as p/2), dist_pow and grad_pow.
  double p = 2.0;
  double rho = 1.0;
  double nu = 2.0;

  static Criterion subopt() { return {Kind::subopt}; }
  static Criterion subopt_pow(double p) { return {Kind::subopt_pow, p}; }
  static Criterion dist_pow(double p) { return {Kind::dist_pow, p}; }
  static Criterion grad_sq() { return {Kind::grad_sq}; }
  static Criterion grad_pow(double p) { return {Kind::grad_pow, p}; }
  static Criterion stationarity(double rho, double nu) {
    return {Kind::stationarity, 2.0, rho, nu};
  }

  std::string name() const;
};

/// Parses "subopt", "subopt_pow(1.5)", "dist_pow(1.5)", "grad_sq",
/// "grad_pow(1.5)", "stationarity(rho,nu)". Throws ConfigError otherwise.
Criterion parse_criterion(const std::string& text);

/// Value of the criterion at a point. Throws ContractViolation naming F* or x*
/// when the instance does not know it.
double criterion_value(const ProblemInstance& problem, const Vector& x, const Criterion& c,
                       double tol = 1e-6);

/// eta-weighted mean of the criterion over x_1..x_T of a trajectory.
double weighted_trajectory_criterion(const ProblemInstance& problem, const Trajectory& traj,
                                     const Criterion& c, double tol = 1e-6);

/// Symbolic constants of the nonconvex rate: rho = 2(L + 2 ell)/(p - 1) and
/// gamma = 2(p - 1)/p.
struct NonconvexPreset {
  double rho;
  double gamma;
};
NonconvexPreset nonconvex_preset(double p, double L, double ell);

}  // namespace htsgd
