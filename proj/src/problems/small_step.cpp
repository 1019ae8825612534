#include <cmath>

#include "htsgd/core/errors.hpp"
#include "htsgd/problems/hard_instances.hpp"

namespace htsgd {

bool small_step_admissible(double eps, double Delta1, double L_nu, double nu) {
  const double lhs = std::pow(eps, nu / (nu - 1.0));
  const double rhs = nu / (nu - 1.0) * (Delta1 / 4.0) * std::pow(L_nu / 2.0, 1.0 / (nu - 1.0));
  return lhs <= rhs;
}

SmallStepHardInstance small_step_instance(double eps, double Delta1, double L_nu, double nu,
                                          const std::function<double(long)>& step_fn,
                                          long max_index) {
  require(eps > 0.0, "small_step_instance: eps must be positive");
  require(L_nu > 0.0, "small_step_instance: L_nu must be positive");
  require(Delta1 >= 0.0, "small_step_instance: Delta1 must be nonnegative");
  require(nu > 1.0 && nu <= 2.0, "small_step_instance: nu must lie in (1, 2]");
  if (!small_step_admissible(eps, Delta1, L_nu, nu)) {
    throw ParameterError(
        "small_step_instance: non-degeneracy fails (eps too large for Delta1 and L_nu); "
        "SGD converges at x_1 or within constantly many iterations");
  }
  SmallStepHardInstance inst;
  inst.eps = eps;
  inst.Delta1 = Delta1;
  inst.L_nu = L_nu;
  inst.nu = nu;
  inst.width = std::pow(2.0 * eps / L_nu, 1.0 / (nu - 1.0));

  // y_1 = 0 always satisfies the ramp condition; advance while y_{T+1} does.
  double y = 0.0;
  long T = 1;
  for (;;) {
    require(T < max_index, "small_step_instance: ramp condition holds past max_index");
    const double eta = step_fn(T);
    require(eta > 0.0, "small_step_instance: step sizes must be positive");
    const double y_next = y + 2.0 * eps * eta;
    if (!(2.0 * eps * y_next <= Delta1 / 2.0)) break;
    y = y_next;
    ++T;
  }
  inst.ramp_end = y;
  inst.T_star = T;
  return inst;
}

double small_step_objective(const SmallStepHardInstance& inst, double x) {
  const double e2 = 2.0 * inst.eps;
  if (x <= inst.ramp_end) return inst.Delta1 - e2 * x;
  if (x <= inst.ramp_end + inst.width) {
    return inst.Delta1 - e2 * x + inst.L_nu / inst.nu * std::pow(x - inst.ramp_end, inst.nu);
  }
  return inst.Delta1 - e2 * inst.ramp_end - e2 * inst.width +
         inst.L_nu / inst.nu * std::pow(inst.width, inst.nu);
}

double small_step_derivative(const SmallStepHardInstance& inst, double x) {
  const double e2 = 2.0 * inst.eps;
  if (x <= inst.ramp_end) return -e2;
  if (x <= inst.ramp_end + inst.width) {
    return -e2 + inst.L_nu * std::pow(x - inst.ramp_end, inst.nu - 1.0);
  }
  return 0.0;
}

ProblemInstance make_small_step(const SmallStepHardInstance& inst) {
  ProblemInstance p;
  p.name = "small_step";
  p.dim = 1;
  p.objective = [inst](const Vector& x) { return small_step_objective(inst, x[0]); };
  p.gradient = [inst](const Vector& x) {
    return Vector::Constant(1, small_step_derivative(inst, x[0]));
  };
  p.oracle = deterministic_oracle(p.gradient);
  p.feasible = FeasibleSet::unconstrained(1);
  p.initial_point = Vector::Zero(1);
  auto& c = p.constants;
  c.p = 2.0;
  c.G = 2.0 * inst.eps;
  c.sigma = 0.0;
  c.nu = inst.nu;
  c.L_nu = inst.L_nu;
  c.F_star = small_step_objective(inst, inst.ramp_end + inst.width + 1.0);
  c.x_star = Vector::Constant(1, inst.ramp_end + inst.width);
  c.Delta1 = inst.Delta1;
  return p;
}

}  // namespace htsgd
