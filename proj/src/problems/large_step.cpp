#include <algorithm>
#include <cmath>
#include <limits>

#include "htsgd/core/errors.hpp"
#include "htsgd/problems/hard_instances.hpp"

namespace htsgd {

namespace {

void check(const LargeStepHardInstance& inst) {
  require(inst.nu > 1.0 && inst.nu <= 2.0, "LargeStepHardInstance: nu must lie in (1, 2]");
  require(inst.p > 1.0 && inst.p <= 2.0, "LargeStepHardInstance: p must lie in (1, 2]");
  require(inst.L_nu > 0.0, "LargeStepHardInstance: L_nu must be positive");
  require(inst.sigma >= 0.0 && inst.sigma <= inst.G,
          "LargeStepHardInstance: need 0 <= sigma <= G");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double large_step_radius(const LargeStepHardInstance& inst) {
  return std::pow(inst.G / (std::pow(2.0, inst.nu - 1.0) * inst.L_nu), 1.0 / (inst.nu - 1.0));
}

double large_step_offset(const LargeStepHardInstance& inst) {
  return (inst.nu - 1.0) / (4.0 * inst.nu) *
         std::pow(std::pow(inst.G, inst.nu) / inst.L_nu, 1.0 / (inst.nu - 1.0));
}

double large_step_tau(const LargeStepHardInstance& inst, double eta) {
  const double inner =
      std::pow(eta, inst.p - 1.0) * std::pow(inst.sigma, inst.p) /
      (std::pow(2.0, inst.p) * inst.L_nu);
  return 0.5 * std::pow(inner, 1.0 / (inst.p + inst.nu - 2.0));
}

double large_step_objective(const LargeStepHardInstance& inst, const Vector& z) {
  const double n = z.norm();
  if (n <= large_step_radius(inst)) {
    return inst.L_nu / (std::pow(2.0, 2.0 - inst.nu) * inst.nu) * std::pow(n, inst.nu);
  }
  return 0.5 * inst.G * n - large_step_offset(inst);
}

Vector large_step_gradient(const LargeStepHardInstance& inst, const Vector& z) {
  const double n = z.norm();
  if (n == 0.0) return Vector::Zero(z.size());
  double magnitude;
  if (n <= large_step_radius(inst)) {
    magnitude = inst.L_nu / std::pow(2.0, 2.0 - inst.nu) * std::pow(n, inst.nu - 1.0);
  } else {
    magnitude = 0.5 * inst.G;
  }
  return (magnitude / n) * z;
}

LargeStepDecision large_step_decide(const LargeStepHardInstance& inst, const Vector& x,
                                    double eta) {
  check(inst);
  require(eta > 0.0, "large_step_oracle: step size must be positive");
  const double r = x.norm();
  require(r > 0.0, "large_step_oracle: undefined at x = 0");

  LargeStepDecision dec;
  dec.tau_bar = std::min(r, large_step_tau(inst, eta));
  const Vector grad = large_step_gradient(inst, x);
  if (gradient_step(x, eta, grad).norm() >= dec.tau_bar) return dec;

  dec.randomized = true;
  const Vector u = x / r;
  // Nudge the two magnitudes outward until the landing points clear tau_bar in
  // floating point, not just in exact arithmetic.
  double gm = (r - dec.tau_bar) / eta;
  double gp = (r + dec.tau_bar) / eta;
  for (int i = 0; i < 64 && gm > 0.0 && gradient_step(x, eta, gm * u).norm() < dec.tau_bar; ++i) {
    gm = std::nextafter(gm, -kInf);
  }
  if (gm < 0.0 || gradient_step(x, eta, gm * u).norm() < dec.tau_bar) gm = 0.0;
  for (int i = 0; i < 64 && gradient_step(x, eta, gp * u).norm() < dec.tau_bar; ++i) {
    gp = std::nextafter(gp, kInf);
  }
  dec.g_minus = gm;
  dec.g_plus = gp;
  const double mu = grad.norm();
  const double prob = (mu - gm) / (gp - gm);
  dec.switch_prob = std::clamp(prob, 0.0, 1.0);
  return dec;
}

Vector large_step_oracle(const LargeStepHardInstance& inst, const Vector& x, double eta,
                         RandomStream& rng) {
  const LargeStepDecision dec = large_step_decide(inst, x, eta);
  const double xi = rng.uniform();
  if (!dec.randomized) return large_step_gradient(inst, x);
  const Vector u = x / x.norm();
  return (xi < dec.switch_prob ? dec.g_plus : dec.g_minus) * u;
}

double large_step_start_norm(const LargeStepHardInstance& inst, double Delta1) {
  return std::pow(std::pow(2.0, 2.0 - inst.nu) * inst.nu * Delta1 / inst.L_nu, 1.0 / inst.nu);
}

ProblemInstance make_large_step(const LargeStepHardInstance& inst, int dim, double Delta1) {
  check(inst);
  require(dim >= 1, "make_large_step: dim must be at least 1");
  require(Delta1 > 0.0, "make_large_step: Delta1 must be positive");
  ProblemInstance p;
  p.name = "large_step";
  p.dim = dim;
  p.objective = [inst](const Vector& z) { return large_step_objective(inst, z); };
  p.gradient = [inst](const Vector& z) { return large_step_gradient(inst, z); };
  p.oracle = [inst](const Vector& x, RandomStream& rng, const OracleQuery& q) {
    return large_step_oracle(inst, x, q.step, rng);
  };
  p.feasible = FeasibleSet::unconstrained(dim);
  p.initial_point = Vector::Zero(dim);
  p.initial_point[0] = large_step_start_norm(inst, Delta1);
  auto& c = p.constants;
  c.p = inst.p;
  c.G = inst.G;
  c.sigma = inst.sigma;
  c.nu = inst.nu;
  c.L_nu = inst.L_nu;
  c.ell_nu = 0.0;
  c.F_star = 0.0;
  c.x_star = Vector::Zero(dim);
  c.Delta1 = Delta1;
  return p;
}

}  // namespace htsgd
