#include "htsgd/measures/subsolver.hpp"

#include <algorithm>
#include <cmath>

#include "htsgd/core/errors.hpp"

namespace htsgd {

double gradient_mapping_norm(const FeasibleSet& set, const Vector& y, const Vector& grad,
                             double step) {
  return (y - set.project(y - step * grad)).norm() / step;
}

SubsolverResult minimize_projected(const SmoothObjective& objective, const FeasibleSet& set,
                                   const Vector& start, const SubsolverOptions& options) {
  require(options.tol > 0.0, "minimize_projected: tol must be positive");
  require(options.max_iterations >= 1, "minimize_projected: need at least one iteration");

  double L = std::max(options.initial_lipschitz, 1e-12);
  Vector y = set.project(start);
  double fy = objective.value(y);
  Vector z = y;       // extrapolated point
  double theta = 1.0;

  SubsolverResult res;
  for (long k = 1; k <= options.max_iterations; ++k) {
    const double fz = objective.value(z);
    const Vector gz = objective.gradient(z);
    Vector y_new;
    double fy_new;
    for (int bt = 0; bt < 200; ++bt) {
      y_new = set.project(z - gz / L);
      fy_new = objective.value(y_new);
      const Vector diff = y_new - z;
      const double model = fz + gz.dot(diff) + 0.5 * L * diff.squaredNorm();
      if (fy_new <= model + 1e-15 * std::abs(fz)) break;
      L *= 2.0;
    }

    if (fy_new > fy) {
      // momentum overshoot: restart from the last accepted point
      z = y;
      theta = 1.0;
      if (k == options.max_iterations) break;
      continue;
    }

    const double theta_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    z = y_new + ((theta - 1.0) / theta_new) * (y_new - y);
    theta = theta_new;
    y = std::move(y_new);
    fy = fy_new;

    const double r = gradient_mapping_norm(set, y, objective.gradient(y), 1.0 / L);
    res.iterations = k;
    if (r <= options.tol) {
      res.y = y;
      res.value = fy;
      res.residual = r;
      res.converged = true;
      return res;
    }
    L *= 0.95;
  }
  res.y = y;
  res.value = fy;
  res.residual = gradient_mapping_norm(set, y, objective.gradient(y), 1.0 / L);
  res.iterations = options.max_iterations;
  res.converged = res.residual <= options.tol;
  return res;
}

}  // namespace htsgd
