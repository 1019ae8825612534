#pragma once

#include <functional>

#include "htsgd/core/feasible_set.hpp"
#include "htsgd/core/vector.hpp"

namespace htsgd {

struct SmoothObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
};

struct SubsolverOptions {
  double tol = 1e-6;
  long max_iterations = 10000;
  /// Initial curvature guess for the backtracking step 1/L.
  double initial_lipschitz = 1.0;
};

struct SubsolverResult {
  Vector y;
  double value = 0.0;
  /// Norm of the projected-gradient mapping at y.
  double residual = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// Accelerated projected gradient with backtracking and function-value
/// restart for a convex differentiable objective over `set`.
SubsolverResult minimize_projected(const SmoothObjective& objective, const FeasibleSet& set,
                                   const Vector& start, const SubsolverOptions& options = {});

/// ||y - Proj(y - step * grad)|| / step.
double gradient_mapping_norm(const FeasibleSet& set, const Vector& y, const Vector& grad,
                             double step);

}  // namespace htsgd
