#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "htsgd/core/errors.hpp"
#include "htsgd/optimizers/output.hpp"
#include "htsgd/optimizers/schedules.hpp"
#include "htsgd/optimizers/sgd.hpp"
#include "htsgd/problems/l1ridge.hpp"
#include "htsgd/problems/quadratic.hpp"

using namespace htsgd;

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

// F(x) = ||x||^2 / 2 on R^d with the exact gradient.
ProblemInstance exact_quadratic(const Vector& x1) {
  const int d = int(x1.size());
  QuadraticProblem q;
  q.H = Matrix::Identity(d, d);
  q.c = Vector::Zero(d);
  q.feasible = FeasibleSet::unconstrained(d);
  return make_quadratic(q, x1);
}

ProblemInstance constant_slope_on_interval() {
  ProblemInstance p;
  p.name = "slope";
  p.dim = 1;
  p.objective = [](const Vector& x) { return -x[0]; };
  p.gradient = [](const Vector&) { return scalar(-1.0); };
  p.oracle = deterministic_oracle(p.gradient);
  p.feasible = FeasibleSet::interval(1, -1.0, 0.0);
  p.initial_point = scalar(-1.0);
  return p;
}

// Hand-built trajectory: iterates x_1, x_2 and the final x_3, steps eta_1, eta_2.
Trajectory two_step(double x1, double x2, double x3, double eta1, double eta2) {
  Trajectory tr;
  tr.iterates = {scalar(x1), scalar(x2), scalar(x3)};
  StepRecord a, b;
  a.t = 1;
  a.step = eta1;
  b.t = 2;
  b.step = eta2;
  tr.records = {a, b};
  return tr;
}

}  // namespace

TEST_CASE("step schedules") {
  CHECK(StepSchedule::constant(0.3).at(17) == 0.3);
  CHECK(StepSchedule::polynomial(1.0, 0.5).at(4) == doctest::Approx(0.5));
  CHECK(StepSchedule::harmonic_sc(2.0, 2.0).at(5) == doctest::Approx(0.2));
  CHECK(ClipSchedule::polynomial(1.0, 0.2).at(32) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(ClipSchedule::constant(3.0).at(9) == 3.0);
  CHECK(tuned_convex_step(2.0, 4.0, 2.0, 100) == doctest::Approx(0.05));
}

TEST_CASE("clipping") {
  Vector v(2);
  v << 3, 4;
  bool active = true;
  CHECK(clip(v, 10.0, &active) == v);
  CHECK_FALSE(active);
  const Vector c = clip(v, 2.5, &active);
  CHECK(active);
  CHECK(c[0] == doctest::Approx(1.5));
  CHECK(c[1] == doctest::Approx(2.0));
}

TEST_CASE("exact gradient step on a quadratic") {
  const ProblemInstance q = exact_quadratic(scalar(1.0));
  RandomStream rng(1, 1);
  const Trajectory tr = run_sgd(q, StepSchedule::constant(1.0), 1, rng);
  CHECK(tr.iterates[1][0] == 0.0);
  CHECK(tr.completed());
  CHECK(tr.horizon() == 1);
}

TEST_CASE("projection clamps iterates to the interval") {
  const ProblemInstance p = constant_slope_on_interval();
  RandomStream rng(1, 1);
  const Trajectory tr = run_sgd(p, StepSchedule::constant(0.5), 3, rng);
  REQUIRE(tr.iterates.size() == 4);
  CHECK(tr.iterates[0][0] == -1.0);
  CHECK(tr.iterates[1][0] == -0.5);
  CHECK(tr.iterates[2][0] == 0.0);
  CHECK(tr.iterates[3][0] == 0.0);
  CHECK(tr.records[0].F == 1.0);
  CHECK(tr.records[1].step == 0.5);
}

TEST_CASE("iterates stay feasible and runs are bitwise reproducible") {
  const ProblemInstance p = make_l1ridge(42, 10, 0.0, 10.0, 1.6);
  for (auto method : {0, 1, 2}) {
    RandomStream a(3, 9), b(3, 9);
    auto go = [&](RandomStream& rng) {
      if (method == 0) return run_sgd(p, StepSchedule::polynomial(1.0, 0.5), 300, rng);
      if (method == 1) {
        return run_clip_sgd(p, StepSchedule::polynomial(1.0, 0.5), ClipSchedule::polynomial(1.0, 0.6),
                            300, rng);
      }
      return run_minibatch_sgd(p, StepSchedule::polynomial(1.0, 0.5), 4, 300, rng);
    };
    const Trajectory ta = go(a), tb = go(b);
    REQUIRE(ta.iterates.size() == tb.iterates.size());
    long infeasible = 0;
    for (std::size_t i = 0; i < ta.iterates.size(); ++i) {
      CHECK(ta.iterates[i] == tb.iterates[i]);
      infeasible += !p.feasible.contains(ta.iterates[i]);
    }
    CHECK(infeasible == 0);
  }
}

TEST_CASE("oracle-call accounting") {
  ProblemInstance p = make_l1ridge(42, 10, 0.0, 10.0, 2.0);
  long calls = 0;
  p.oracle = counting_oracle(p.oracle, &calls);
  RandomStream rng(1, 1);
  const Trajectory a = run_sgd(p, StepSchedule::constant(0.01), 37, rng);
  CHECK(calls == 37);
  CHECK(a.oracle_calls == 37);
  calls = 0;
  const Trajectory b = run_minibatch_sgd(p, StepSchedule::constant(0.01), 5, 37, rng);
  CHECK(calls == 37 * 5);
  CHECK(b.oracle_calls == 37 * 5);
}

TEST_CASE("minibatch degenerate cases match plain SGD") {
  const ProblemInstance p = make_l1ridge(42, 10, 0.0, 10.0, 1.6);
  RandomStream a(2, 2), b(2, 2);
  const Trajectory s = run_sgd(p, StepSchedule::constant(0.05), 50, a);
  const Trajectory m = run_minibatch_sgd(p, StepSchedule::constant(0.05), 1, 50, b);
  for (std::size_t i = 0; i < s.iterates.size(); ++i) CHECK(s.iterates[i] == m.iterates[i]);

  ProblemInstance det = p;
  det.oracle = deterministic_oracle(p.gradient);
  RandomStream c(2, 2), d(2, 2);
  const Trajectory s2 = run_sgd(det, StepSchedule::constant(0.05), 50, c);
  const Trajectory m2 = run_minibatch_sgd(det, StepSchedule::constant(0.05), 7, 50, d);
  for (std::size_t i = 0; i < s2.iterates.size(); ++i) CHECK(s2.iterates[i] == m2.iterates[i]);
}

TEST_CASE("minibatch central moment respects the batch bound") {
  const int dim = 10;
  const double p = 1.5;
  const ProblemInstance q = make_isotropic_quadratic(dim, 2.0, Vector::Ones(dim));
  const Vector x = Vector::Ones(dim);
  const Vector g = q.gradient(x);
  RandomStream rng(4, 4);
  double single = 0, batched = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    single += std::pow((minibatch_gradient(q, x, 1, rng, {}) - g).norm(), p);
    batched += std::pow((minibatch_gradient(q, x, 16, rng, {}) - g).norm(), p);
  }
  const double sigma_p = pareto_vector_moment_bound(2.0, p, dim);
  CHECK(single / n <= sigma_p);
  CHECK(batched / n <= 2.0 * sigma_p / std::pow(16.0, p - 1.0));
}

TEST_CASE("clipping that never binds reproduces SGD") {
  const ProblemInstance p = make_l1ridge(42, 10, 0.0, 10.0, 2.0);
  RandomStream a(5, 5), b(5, 5);
  const Trajectory s = run_sgd(p, StepSchedule::constant(0.05), 100, a);
  const Trajectory c =
      run_clip_sgd(p, StepSchedule::constant(0.05), ClipSchedule::constant(1e300), 100, b);
  for (std::size_t i = 0; i < s.iterates.size(); ++i) CHECK(s.iterates[i] == c.iterates[i]);
  for (const auto& r : c.records) CHECK_FALSE(r.clipped);
}

TEST_CASE("theoretical batch size") {
  CHECK(theoretical_batch_size(1.5, 0.1, 0.1, 0.1, 10.0, 10.0, 5) == 1);
  CHECK(theoretical_batch_size(2.0, 1.0, 1.0, 2.0, 1.0, 1.0, 1) == 4);
  const long b1 = theoretical_batch_size(1.5, 3.0, 2.0, 5.0, 1.0, 1.0, 1000);
  const long b2 = theoretical_batch_size(1.5, 3.0, 2.0, 5.0, 1.0, 1.0, 2000);
  CHECK(double(b2) / double(b1) == doctest::Approx(std::pow(2.0, 1.0 / 0.5)).epsilon(1e-4));
}

TEST_CASE("p-th power mirror step") {
  const ProblemInstance zero_grad = [] {
    ProblemInstance p = exact_quadratic(Vector::Ones(2));
    p.gradient = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
    p.oracle = deterministic_oracle(p.gradient);
    return p;
  }();
  RandomStream rng(1, 1);
  RunOptions opt;
  Vector unit(2);
  unit << 0.6, 0.8;
  opt.start = unit;
  const Trajectory fixed = run_psmd(zero_grad, StepSchedule::constant(1.0), 1.5, 3, rng, opt);
  for (const auto& x : fixed.iterates) CHECK((x - unit).norm() < 1e-15);

  // one-dimensional example: x = 1, eta * g = 0.5, p = 1.5
  ProblemInstance half = exact_quadratic(scalar(1.0));
  half.oracle = deterministic_oracle([](const Vector&) { return scalar(0.5); });
  const Trajectory one = run_psmd(half, StepSchedule::constant(1.0), 1.5, 1, rng);
  CHECK(one.iterates[1][0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

  // p = 2: no normalization
  Vector s(2);
  s << 2.0, 0.0;
  opt.start = s;
  ProblemInstance lin = exact_quadratic(s);
  lin.oracle = deterministic_oracle([](const Vector&) { return Vector(Vector::Ones(2)); });
  const Trajectory two = run_psmd(lin, StepSchedule::constant(0.5), 2.0, 1, rng, opt);
  CHECK(two.iterates[1][0] == doctest::Approx(2.0 * 4.0 - 0.5));
  CHECK(two.iterates[1][1] == doctest::Approx(-0.5));

  // exact cancellation aborts
  ProblemInstance cancel = exact_quadratic(scalar(1.0));
  cancel.oracle = deterministic_oracle([](const Vector&) { return scalar(1.0); });
  const Trajectory dead = run_psmd(cancel, StepSchedule::constant(1.0), 1.5, 5, rng);
  CHECK(dead.status == RunStatus::numerical_degeneracy);
  CHECK(dead.abort_step == 1);
  CHECK(dead.iterates.size() == 1);
  CHECK_THROWS_AS(run_psmd(make_l1ridge(1, 2, 0.0, 1.0, 2.0), StepSchedule::constant(1.0), 1.5, 1, rng),
                  ContractViolation);
}

TEST_CASE("divergence guard records the abort step") {
  ProblemInstance p = exact_quadratic(scalar(1.0));
  p.oracle = deterministic_oracle([](const Vector& x) { return Vector(-1e6 * x); });
  RandomStream rng(1, 1);
  const Trajectory tr = run_sgd(p, StepSchedule::constant(1.0), 10, rng);
  CHECK(tr.status == RunStatus::diverged);
  CHECK(tr.abort_step == 2);
  CHECK(tr.iterates.size() == 2);
  CHECK(tr.records.size() == 2);
  CHECK(to_string(tr.status) == "diverged");
}

TEST_CASE("output strategies") {
  const Trajectory tr = two_step(0.0, 2.0, 7.0, 1.0, 3.0);
  RandomStream rng(1, 1);
  CHECK(select_output(tr, OutputStrategy::simple_average, rng)[0] == 1.0);
  CHECK(select_output(tr, OutputStrategy::weighted_average, rng)[0] == 1.5);
  CHECK(select_output(tr, OutputStrategy::last, rng)[0] == 7.0);
  CHECK(select_output_prefix(tr, 1, OutputStrategy::last, rng)[0] == 2.0);

  const Trajectory flat = two_step(0.0, 2.0, 7.0, 0.5, 0.5);
  CHECK(select_output(flat, OutputStrategy::weighted_average, rng)[0] ==
        select_output(flat, OutputStrategy::simple_average, rng)[0]);

  RandomStream a = RandomStream(9, 9).substream(kOutputSelectionTag);
  RandomStream b = RandomStream(9, 9).substream(kOutputSelectionTag);
  CHECK(select_output(tr, OutputStrategy::uniform_random, a) ==
        select_output(tr, OutputStrategy::uniform_random, b));

  CHECK(parse_output_strategy("simple_average") == OutputStrategy::simple_average);
  CHECK_THROWS_AS(parse_output_strategy("median"), ConfigError);
}

TEST_CASE("uniform output covers every index") {
  const Trajectory tr = two_step(0.0, 2.0, 7.0, 1.0, 1.0);
  int zeros = 0;
  for (std::uint64_t id = 0; id < 4000; ++id) {
    RandomStream s = RandomStream(1, id).substream(kOutputSelectionTag);
    zeros += select_output(tr, OutputStrategy::uniform_random, s)[0] == 0.0;
  }
  CHECK(std::abs(zeros / 4000.0 - 0.5) < 4 * 0.5 / std::sqrt(4000.0));
}
