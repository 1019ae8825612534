#pragma once

#include <optional>

#include "htsgd/core/problem.hpp"
#include "htsgd/noise/noise.hpp"

namespace htsgd {

/// F(y) = 1/2 y^T H y + c^T y with symmetric H. The oracle adds Pareto noise
/// when `noise_alpha` is set and is exact otherwise.
struct QuadraticProblem {
  Matrix H;
  Vector c;
  FeasibleSet feasible = FeasibleSet::unconstrained(1);
  std::optional<double> noise_alpha;
};

double quadratic_objective(const QuadraticProblem& q, const Vector& y);
Vector quadratic_gradient(const QuadraticProblem& q, const Vector& y);

/// Extreme eigenvalues of H.
double quadratic_max_curvature(const QuadraticProblem& q);
double quadratic_min_curvature(const QuadraticProblem& q);

/// Holder constants of the gradient for exponent nu on a set of diameter D:
/// upper nu * max(lambda_max, 0) * D^(2-nu) / 2, lower nu * max(-lambda_min, 0)
/// * D^(2-nu) / 2.
double quadratic_upper_holder(const QuadraticProblem& q, double nu, double diameter);
double quadratic_lower_holder(const QuadraticProblem& q, double nu, double diameter);

ProblemInstance make_quadratic(const QuadraticProblem& q, const Vector& x1);

/// F(x) = ||x||^2 / 2 on R^d with Pareto(alpha) noise.
ProblemInstance make_isotropic_quadratic(int dim, double alpha, const Vector& x1);

}  // namespace htsgd
