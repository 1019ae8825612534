#include <cmath>
#include <numeric>

#include "htsgd/core/errors.hpp"
#include "htsgd/problems/hard_instances.hpp"

namespace htsgd {

HPParameters hp_hard_parameters(const std::vector<double>& gammas, double alpha, double delta) {
  if (!(delta > 0.0 && delta <= 0.125)) {
    throw ParameterError("hp_hard_parameters: delta must lie in (0, 1/8], got " +
                         std::to_string(delta));
  }
  require(alpha > 1.0 && alpha <= 2.0, "hp_hard_parameters: alpha must lie in (1, 2]");
  require(!gammas.empty(), "hp_hard_parameters: empty coefficient sequence");
  double sum = 0.0;
  double sum_pow = 0.0;
  for (double g : gammas) {
    require(g >= 0.0, "hp_hard_parameters: coefficients must be nonnegative");
    sum += g;
    sum_pow += std::pow(g, alpha);
  }
  require(sum > 0.0, "hp_hard_parameters: coefficients must not all vanish");
  const double a = std::pow(sum_pow, 1.0 / alpha) / (2.0 * sum) *
                   std::pow(1.0 / (4.0 * alpha * delta), 1.0 / alpha);
  return {a, 1.0 / sum};
}

std::vector<double> last_iterate_cone(const std::vector<double>& steps) { return steps; }

std::vector<double> average_cone(const std::vector<double>& steps) {
  const double T = double(steps.size());
  std::vector<double> gammas(steps.size());
  for (std::size_t k = 0; k < steps.size(); ++k) {
    gammas[k] = steps[k] * (T - double(k + 1)) / T;
  }
  return gammas;
}

double hp_hard_objective(const HPHardInstance& inst, double x) {
  if (x <= 0.0) return -inst.a * x;
  const double knee = inst.a / inst.L;
  if (x >= knee) return -inst.a * inst.a / (2.0 * inst.L);
  return 0.5 * inst.L * x * x - inst.a * x;
}

double hp_hard_derivative(const HPHardInstance& inst, double x) {
  if (x <= 0.0) return -inst.a;
  if (x >= inst.a / inst.L) return 0.0;
  return inst.L * x - inst.a;
}

double hp_hard_gradient_with_noise(const HPHardInstance& inst, double x, double xi) {
  return hp_hard_derivative(inst, x) + xi;
}

double hp_hard_gradient(const HPHardInstance& inst, double x, RandomStream& rng) {
  return hp_hard_gradient_with_noise(inst, x, sample_stable(make_stable(inst.alpha), rng));
}

double hp_hard_minimizer(const HPHardInstance& inst) { return inst.a / inst.L; }

double hp_hard_optimal_value(const HPHardInstance& inst) {
  return -inst.a * inst.a / (2.0 * inst.L);
}

ProblemInstance make_hp_hard(const HPHardInstance& inst, double x1) {
  require(inst.a > 0.0 && inst.L > 0.0, "make_hp_hard: a and L must be positive");
  ProblemInstance p;
  p.name = "hp_hard";
  p.dim = 1;
  p.objective = [inst](const Vector& x) { return hp_hard_objective(inst, x[0]); };
  p.gradient = [inst](const Vector& x) {
    return Vector::Constant(1, hp_hard_derivative(inst, x[0]));
  };
  p.oracle = [inst](const Vector& x, RandomStream& rng, const OracleQuery&) {
    return Vector::Constant(1, hp_hard_gradient(inst, x[0], rng));
  };
  p.feasible = FeasibleSet::unconstrained(1);
  p.initial_point = Vector::Constant(1, x1);
  auto& c = p.constants;
  c.p = inst.alpha < 2.0 ? inst.alpha - 0.05 : 2.0;
  c.mu = 0.0;
  c.nu = 2.0;
  c.L_nu = inst.L;
  c.F_star = hp_hard_optimal_value(inst);
  c.x_star = Vector::Constant(1, hp_hard_minimizer(inst));
  c.Delta1 = hp_hard_objective(inst, x1) - *c.F_star;
  return p;
}

}  // namespace htsgd
