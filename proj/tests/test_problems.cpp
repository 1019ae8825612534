#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "htsgd/core/errors.hpp"
#include "htsgd/harness/lower_bounds.hpp"
#include "htsgd/optimizers/sgd.hpp"
#include "htsgd/problems/hard_instances.hpp"
#include "htsgd/problems/l1ridge.hpp"
#include "htsgd/problems/quadratic.hpp"

using namespace htsgd;

namespace {

L1RidgeProblem tiny(double a, double b, double mu) {
  L1RidgeProblem p;
  p.A = Matrix::Constant(1, 1, a);
  p.b = Vector::Constant(1, b);
  p.mu = mu;
  p.R = 10.0;
  p.alpha = 2.0;
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// L1 ridge benchmark

TEST_CASE("l1ridge one-dimensional examples") {
  const L1RidgeProblem abs = tiny(1, 0, 0);
  CHECK(l1ridge_objective(abs, Vector::Constant(1, -3)) == 3.0);
  CHECK(l1ridge_subgradient(abs, Vector::Zero(1))[0] == 0.0);

  const ReferenceSolution shifted = solve_reference(tiny(1, 2, 0), 1e-10);
  CHECK(shifted.x_star[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(shifted.F_star == doctest::Approx(0.0).epsilon(1e-9));

  const ReferenceSolution ridge = solve_reference(tiny(1, 0, 1), 1e-10);
  CHECK(std::abs(ridge.x_star[0]) < 1e-6);
  CHECK(std::abs(ridge.F_star) < 1e-9);
}

TEST_CASE("l1ridge two-dimensional minimizer matches a grid search") {
  L1RidgeProblem prob;
  prob.A = Matrix::Identity(2, 2);
  prob.b = Vector::Ones(2);
  prob.mu = 1.0;
  prob.R = 10.0;
  prob.alpha = 2.0;
  // independent scalar evaluation over [-2, 2]^2 at spacing 1e-3
  double best = std::numeric_limits<double>::infinity();
  double bx = 0, by = 0;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -2.0 + 1e-3 * i;
    for (int j = 0; j <= 4000; ++j) {
      const double y = -2.0 + 1e-3 * j;
      const double f = std::abs(x - 1) + std::abs(y - 1) + 0.5 * (x * x + y * y);
      if (f < best) {
        best = f;
        bx = x;
        by = y;
      }
    }
  }
  const ReferenceSolution ref = solve_reference(prob, 1e-10);
  CHECK(std::abs(ref.x_star[0] - bx) <= 1e-3);
  CHECK(std::abs(ref.x_star[1] - by) <= 1e-3);
  CHECK(ref.F_star <= best + 1e-9);
  CHECK(ref.F_star == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("benchmark instance starts at the projected corner") {
  const ProblemInstance inst = make_l1ridge(42, 10, 0.0, 10.0, 2.0);
  CHECK(inst.initial_point == Vector::Constant(10, 100.0));
  CHECK(inst.feasible.project(inst.initial_point) == Vector::Constant(10, 10.0));
  CHECK(inst.constants.p == 2.0);
  CHECK(inst.constants.F_star.has_value());
  CHECK(*inst.constants.Delta1 > 0.0);
  CHECK(inst.objective(*inst.constants.x_star) == doctest::Approx(*inst.constants.F_star).epsilon(1e-12));
}

TEST_CASE("reference optimum is stable across solver configurations") {
  const L1RidgeProblem prob = make_l1ridge_data(42, 10, 0.0, 10.0, 2.0);
  ReferenceOptions a, b;
  b.step_ratio = 4.0;
  const ReferenceSolution ra = solve_reference(prob, 1e-9, a);
  const ReferenceSolution rb = solve_reference(prob, 1e-9, b);
  CHECK(std::abs(ra.F_star - rb.F_star) <= 1e-6);
  CHECK(ra.gap <= 1e-9);

  const L1RidgeProblem sc = make_l1ridge_data(42, 10, 1.0, 10.0, 2.0);
  ReferenceOptions sg;
  sg.method = ReferenceMethod::subgradient;
  sg.subgradient_scale = 0.5;
  const ReferenceSolution pd = solve_reference(sc, 1e-9);
  const ReferenceSolution su = solve_reference(sc, 1e-9, sg);
  CHECK(su.F_star >= pd.F_star - 1e-9);
  // the subgradient method only reaches O(1/sqrt(t)) accuracy
  CHECK(su.F_star - pd.F_star <= 1e-2);
}

TEST_CASE("reference solver reports the iteration cap") {
  const L1RidgeProblem prob = make_l1ridge_data(42, 10, 0.0, 10.0, 2.0);
  ReferenceOptions opt;
  opt.max_iterations = 5;
  CHECK_THROWS_AS(solve_reference(prob, 1e-12, opt), SolverError);
}

TEST_CASE("moment order defaults and gradient bound") {
  CHECK(default_moment_order(2.0) == 2.0);
  CHECK(default_moment_order(1.6) == doctest::Approx(1.55));
  const L1RidgeProblem prob = make_l1ridge_data(1, 3, 0.0, 10.0, 1.6);
  CHECK(std::isinf(l1ridge_gradient_bound(prob, 1.7)));
  CHECK(std::isfinite(l1ridge_gradient_bound(prob, 1.5)));
}

// ---------------------------------------------------------------------------
// high-probability instance

TEST_CASE("hp instance gradients") {
  const HPHardInstance inst{1.0, 1.0, 2.0};
  CHECK(hp_hard_gradient_with_noise(inst, -2.0, 0.3) == doctest::Approx(-0.7));
  CHECK(hp_hard_gradient_with_noise(inst, 0.5, 0.0) == doctest::Approx(-0.5));
  CHECK(hp_hard_gradient_with_noise(inst, 5.0, 0.2) == doctest::Approx(0.2));
  CHECK(hp_hard_minimizer(inst) == 1.0);
  CHECK(hp_hard_optimal_value(inst) == -0.5);
}

TEST_CASE("hp instance parameters") {
  const HPParameters four = hp_hard_parameters({1, 1, 1, 1}, 2.0, 0.125);
  CHECK(four.a == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(four.L == doctest::Approx(0.25).epsilon(1e-15));
  const HPParameters one = hp_hard_parameters({1}, 2.0, 0.125);
  CHECK(one.a == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one.L == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> g = {0.7, 0.2, 1.3};
  const HPParameters base = hp_hard_parameters(g, 1.6, 0.05);
  for (double c : {0.1, 3.0, 17.0}) {
    std::vector<double> scaled = g;
    for (auto& v : scaled) v *= c;
    const HPParameters s = hp_hard_parameters(scaled, 1.6, 0.05);
    CHECK(s.a == doctest::Approx(base.a).epsilon(1e-13));
    CHECK(s.L == doctest::Approx(base.L / c).epsilon(1e-13));
  }
  CHECK_THROWS_AS(hp_hard_parameters({1}, 2.0, 0.2), ParameterError);
  CHECK_THROWS_AS(hp_hard_parameters({1}, 2.0, 0.0), ParameterError);
}

TEST_CASE("average cone coefficients") {
  const auto c = average_cone({1.0, 1.0, 1.0, 1.0});
  CHECK(c[0] == doctest::Approx(0.75));
  CHECK(c[3] == 0.0);
  CHECK(last_iterate_cone({0.5, 0.25}) == std::vector<double>{0.5, 0.25});
}

TEST_CASE("hp instance is continuous and differentiable at its breakpoints") {
  const HPHardInstance inst{0.3, 0.7, 1.5};
  const double knee = inst.a / inst.L;
  const double h = 1e-9;
  for (double b : {0.0, knee}) {
    CHECK(hp_hard_objective(inst, b - h) == doctest::Approx(hp_hard_objective(inst, b + h)).epsilon(1e-8));
    CHECK(std::abs(hp_hard_derivative(inst, b - h) - hp_hard_derivative(inst, b + h)) < 1e-8);
  }
  RandomStream rng(1, 0);
  long bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double x = 4.0 * (rng.uniform() - 0.5);
    const double xi = 3.0 * rng.normal();
    bad += hp_hard_gradient_with_noise(inst, x, xi) < -inst.a + xi;
  }
  CHECK(bad == 0);
}

TEST_CASE("hp lower-bound demo at T = 2") {
  HPConvexParams prm;
  prm.T = 2;
  prm.runs = 10000;
  const HPConvexReport rep = hp_convex_demo(prm);
  CHECK(rep.frequency >= prm.delta - 3.0 * rep.standard_error);
  CHECK_THROWS_AS(
      [] {
        HPConvexParams bad;
        bad.delta = 0.3;
        bad.runs = 1;
        hp_convex_demo(bad);
      }(),
      ParameterError);
}

// ---------------------------------------------------------------------------
// small-step instance

TEST_CASE("small-step instance geometry") {
  const auto inst = small_step_instance(0.5, 10.0, 1.0, 2.0, [](long) { return 0.125; });
  CHECK(inst.width == doctest::Approx(1.0));
  CHECK(small_step_objective(inst, 0.0) == 10.0);
  const double inf_f = small_step_objective(inst, inst.ramp_end + inst.width + 5.0);
  CHECK(small_step_objective(inst, 0.0) - inf_f <= 10.0);
  // convex, (2 eps)-Lipschitz and Holder smooth on a sample grid
  long bad = 0;
  RandomStream rng(2, 0);
  for (int k = 0; k < 10000; ++k) {
    const double x = -5.0 + 30.0 * rng.uniform();
    const double y = -5.0 + 30.0 * rng.uniform();
    const double fx = small_step_objective(inst, x), fy = small_step_objective(inst, y);
    bad += small_step_objective(inst, 0.5 * (x + y)) > 0.5 * (fx + fy) + 1e-12;
    bad += std::abs(fx - fy) > 1.0 * std::abs(x - y) + 1e-12;
    bad += std::abs(small_step_derivative(inst, x) - small_step_derivative(inst, y)) >
           1.0 * std::abs(x - y) + 1e-12;
  }
  CHECK(bad == 0);
}

TEST_CASE("SGD advances by 2 eps eta on the ramp") {
  const auto inst = small_step_instance(0.5, 10.0, 1.0, 2.0, [](long) { return 0.125; });
  const ProblemInstance p = make_small_step(inst);
  RandomStream rng(1, 1);
  const Trajectory tr = run_sgd(p, StepSchedule::constant(0.125), 20, rng);
  for (int t = 0; t < 20; ++t) CHECK(tr.iterates[t + 1][0] - tr.iterates[t][0] == 0.125);

  const auto inst2 = small_step_instance(0.5, 10.0, 1.0, 2.0, [](long) { return 0.1; });
  const Trajectory tr2 = run_sgd(make_small_step(inst2), StepSchedule::constant(0.1), 20, rng);
  for (int t = 0; t < 20; ++t) {
    CHECK(tr2.iterates[t + 1][0] - tr2.iterates[t][0] == doctest::Approx(0.1).epsilon(1e-12));
  }
  CHECK(rng.position() == 0);
}

TEST_CASE("small-step demo with constant step 0.01") {
  SmallStepParams prm;
  prm.eta = 0.01;
  prm.eps = 0.5;
  prm.Delta1 = 10.0;
  const SmallStepReport rep = small_step_demo(prm);
  CHECK(rep.bound_quarter == 10.0);
  CHECK(rep.bound_eighth == 5.0);
  // frozen from an independent scalar recursion of the same construction
  CHECK(rep.ramp_index == 501);
  CHECK(rep.first_hit == 570);
  CHECK(rep.step_sum == doctest::Approx(5.69).epsilon(1e-12));
  CHECK(rep.exceeds_eighth);
  CHECK_FALSE(rep.exceeds_quarter);
}

TEST_CASE("small-step construction rejects degenerate parameters") {
  CHECK_FALSE(small_step_admissible(10.0, 1.0, 1.0, 2.0));
  CHECK_THROWS_AS(small_step_instance(10.0, 1.0, 1.0, 2.0, [](long) { return 0.1; }),
                  ParameterError);
}

// ---------------------------------------------------------------------------
// step-adversarial instance

TEST_CASE("large-step constants") {
  LargeStepHardInstance inst{2.0, 2.0, 2.0, 4.0, 1.0};
  CHECK(large_step_tau(inst, 1.0) == doctest::Approx(0.5));
  CHECK(large_step_radius(inst) == doctest::Approx(2.0));
  for (long t = 1; t <= 100; ++t) {
    const double eta = 1.0 / std::sqrt(double(t));
    CHECK(large_step_tau(inst, eta) == doctest::Approx(0.5 * std::pow(double(t), -0.25)));
  }
  // value and slope continuous at the radius
  Vector a = Vector::Zero(3), b = Vector::Zero(3);
  a[0] = 2.0 - 1e-9;
  b[0] = 2.0 + 1e-9;
  CHECK(large_step_objective(inst, a) == doctest::Approx(large_step_objective(inst, b)).epsilon(1e-8));
  CHECK(large_step_gradient(inst, a).norm() == doctest::Approx(large_step_gradient(inst, b).norm()).epsilon(1e-8));
  const ProblemInstance p = make_large_step(inst, 3, 1.0);
  CHECK(p.objective(p.initial_point) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("large-step two-point case") {
  LargeStepHardInstance inst{2.0, 2.0, std::sqrt(2.4), 4.0, 0.6};
  Vector x = Vector::Zero(2);
  x[0] = 1.0;
  const LargeStepDecision dec = large_step_decide(inst, x, 1.0);
  CHECK(dec.randomized);
  CHECK(dec.tau_bar == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dec.g_minus == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dec.g_plus == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(dec.switch_prob == doctest::Approx(0.1).epsilon(1e-10));
  CHECK((1 - dec.switch_prob) * dec.g_minus + dec.switch_prob * dec.g_plus ==
        doctest::Approx(0.6).epsilon(1e-12));
  RandomStream rng(1, 2);
  for (int k = 0; k < 1000; ++k) {
    const Vector g = large_step_oracle(inst, x, 1.0, rng);
    CHECK(gradient_step(x, 1.0, g).norm() >= dec.tau_bar);
  }
  CHECK(rng.position() == 1000);
}

TEST_CASE("large-step deterministic case still consumes one draw") {
  LargeStepHardInstance inst{2.0, 2.0, 2.0, 4.0, 1.0};
  Vector x = Vector::Zero(3);
  x[1] = 5.0;
  CHECK_FALSE(large_step_decide(inst, x, 0.1).randomized);
  RandomStream rng(1, 3);
  const Vector g = large_step_oracle(inst, x, 0.1, rng);
  CHECK(g == large_step_gradient(inst, x));
  CHECK(rng.position() == 1);
  CHECK_THROWS_AS(large_step_oracle(inst, Vector::Zero(3), 0.1, rng), ContractViolation);
}

TEST_CASE("large-step exclusion along trajectories") {
  LargeStepParams prm;
  prm.runs = 500;
  const LargeStepReport rep = large_step_demo(prm);
  CHECK(rep.violations == 0);
  CHECK(rep.aborted == 0);
  CHECK(rep.min_tau == doctest::Approx(0.5 * std::pow(200.0, -0.25)));
}

// ---------------------------------------------------------------------------
// quadratics and the unconstrained counterexample

TEST_CASE("quadratic curvature and Holder constants") {
  QuadraticProblem q;
  q.H = Matrix::Zero(2, 2);
  q.H(0, 0) = 3.0;
  q.H(1, 1) = -1.0;
  q.c = Vector::Zero(2);
  q.feasible = FeasibleSet::box(2, 1.0);
  CHECK(quadratic_max_curvature(q) == doctest::Approx(3.0));
  CHECK(quadratic_min_curvature(q) == doctest::Approx(-1.0));
  const double D = *q.feasible.diameter();
  CHECK(quadratic_upper_holder(q, 2.0, D) == doctest::Approx(3.0));
  CHECK(quadratic_lower_holder(q, 1.5, D) == doctest::Approx(0.75 * std::pow(D, 0.5)));
  const ProblemInstance inst = make_isotropic_quadratic(2, 0.0, Vector::Ones(2));
  CHECK(inst.constants.x_star->norm() == 0.0);
  CHECK(*inst.constants.F_star == 0.0);
}

TEST_CASE("unconstrained heavy-tailed step has infinite mean value but finite lower moment") {
  const ProblemInstance inst = make_isotropic_quadratic(1, 2.0, Vector::Ones(1));
  RandomStream rng(12, 0);
  std::vector<double> f_means, pow_means;
  double f_sum = 0, pow_sum = 0;
  long n = 0;
  for (long target = 1024; target <= (1L << 21); target *= 2) {
    for (; n < target; ++n) {
      const Trajectory tr = run_sgd(inst, StepSchedule::constant(1.0), 1, rng,
                                    RunOptions{1e12, false, true, std::nullopt});
      const double f = inst.objective(tr.iterates[1]);
      f_sum += f;
      pow_sum += std::pow(f, 0.75);
    }
    f_means.push_back(f_sum / n);
    pow_means.push_back(pow_sum / n);
  }
  CHECK(f_means.back() > 1.5 * f_means.front());
  for (std::size_t i = pow_means.size() - 4; i < pow_means.size(); ++i) {
    CHECK(pow_means[i] / pow_means.back() == doctest::Approx(1.0).epsilon(0.05));
  }
}
