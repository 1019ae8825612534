#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "htsgd/core/errors.hpp"
#include "htsgd/core/random_stream.hpp"
#include "htsgd/measures/criteria.hpp"
#include "htsgd/measures/envelopes.hpp"
#include "htsgd/problems/quadratic.hpp"

using namespace htsgd;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ProblemInstance half_square(int d, FeasibleSet set) {
  QuadraticProblem q;
  q.H = Matrix::Identity(d, d);
  q.c = Vector::Zero(d);
  q.feasible = set;
  return make_quadratic(q, Vector::Zero(d));
}

ProblemInstance random_convex_box_quadratic(RandomStream& gen, int d, double R) {
  Matrix M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = gen.normal();
  QuadraticProblem q;
  q.H = M * M.transpose() / double(d) + 0.1 * Matrix::Identity(d, d);
  q.c.resize(d);
  for (int i = 0; i < d; ++i) q.c[i] = gen.normal();
  q.feasible = FeasibleSet::box(d, R);
  return make_quadratic(q, Vector::Zero(d));
}

double fbe_scale(double rho, double nu) { return nu * std::pow(rho, 1.0 / (nu - 1.0)) / (nu - 1.0); }

// min over z in [a, b] of g z + (rho/nu)|z|^nu by ternary search on a convex function.
double scalar_model_min(double g, double rho, double nu, double a, double b) {
  auto h = [&](double z) { return g * z + rho / nu * std::pow(std::abs(z), nu); };
  double lo = a, hi = b;
  for (int i = 0; i < 400; ++i) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    (h(m1) < h(m2) ? hi : lo) = h(m1) < h(m2) ? m2 : m1;
  }
  return std::min({h(0.5 * (lo + hi)), h(a), h(b), 0.0});
}

}  // namespace

TEST_CASE("FBE closed form examples") {
  const ProblemInstance f = half_square(2, FeasibleSet::unconstrained(2));
  for (double rho : {0.1, 1.0, 7.0}) {
    const StationarityEstimate e = fbe(FBEQuery{rho, 2.0, vec2(3, 4), &f});
    CHECK(e.D == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(e.S == doctest::Approx(25.0).epsilon(1e-14));
    CHECK(e.method == FBEMethod::closed_form);
  }
  const Vector g = vec2(0.0, 8.0);
  const StationarityEstimate e =
      fbe_at(Vector::Zero(2), g, FeasibleSet::unconstrained(2), 3.0, 1.5, 1e-8);
  CHECK(e.D == doctest::Approx(512.0).epsilon(1e-13));
  CHECK(e.S == doctest::Approx(64.0).epsilon(1e-13));

  const StationarityEstimate zero = fbe(FBEQuery{1.0, 1.5, Vector::Zero(2), &f});
  CHECK(zero.D == 0.0);
  CHECK(zero.S == 0.0);
}

TEST_CASE("FBE with nu = 2 on a box matches the explicit projection") {
  RandomStream gen(11, 0);
  for (int k = 0; k < 500; ++k) {
    const int d = 1 + k % 4;
    const double R = 0.5 + gen.uniform();
    const FeasibleSet set = FeasibleSet::box(d, R);
    Vector x(d), g(d);
    for (int i = 0; i < d; ++i) {
      x[i] = R * (2.0 * gen.uniform() - 1.0);
      g[i] = 3.0 * gen.normal();
    }
    const double rho = 0.2 + 4.0 * gen.uniform();
    double model = 0.0;
    for (int i = 0; i < d; ++i) {
      const double zi = std::clamp(x[i] - g[i] / rho, -R, R) - x[i];
      model += g[i] * zi + 0.5 * rho * zi * zi;
    }
    const double expected = -2.0 * rho * model;
    const StationarityEstimate e = fbe_at(x, g, set, rho, 2.0, 1e-8);
    CHECK(e.D == doctest::Approx(expected).epsilon(1e-12).scale(1e-12));
    CHECK(e.D >= 0.0);
  }
}

TEST_CASE("FBE radial root matches a scalar search in one dimension") {
  RandomStream gen(12, 0);
  for (int k = 0; k < 500; ++k) {
    const double nu = 1.05 + 0.9 * gen.uniform();
    const double rho = 0.1 + 5.0 * gen.uniform();
    const double x = 2.0 * gen.uniform() - 1.0;
    const double g = 4.0 * gen.normal();
    const FeasibleSet set = FeasibleSet::interval(1, -1.0, 1.0);
    const double expected = -fbe_scale(rho, nu) * scalar_model_min(g, rho, nu, -1.0 - x, 1.0 - x);
    const StationarityEstimate e =
        fbe_at(Vector::Constant(1, x), Vector::Constant(1, g), set, rho, nu, 1e-8);
    CHECK(e.method == FBEMethod::radial_root);
    CHECK(e.D == doctest::Approx(expected).epsilon(1e-8).scale(1e-12));
  }
}

TEST_CASE("FBE radial root agrees with projected descent on boxes") {
  RandomStream gen(13, 0);
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    const FeasibleSet set = FeasibleSet::box(d, 1.0);
    Vector x(d), g(d);
    for (int i = 0; i < d; ++i) {
      x[i] = 2.0 * gen.uniform() - 1.0;
      g[i] = 2.0 * gen.normal();
    }
    const double nu = 1.2 + 0.7 * gen.uniform();
    const double rho = 0.5 + 3.0 * gen.uniform();
    const StationarityEstimate a = fbe_at(x, g, set, rho, nu, 1e-10, FBEMethod::radial_root);
    const StationarityEstimate b = fbe_at(x, g, set, rho, nu, 1e-10, FBEMethod::projected_descent);
    CHECK(std::abs(a.D - b.D) <= 1e-6 * std::max(1.0, a.D));
    // the radial root is exact, so descent can only land above the minimum
    CHECK(b.D <= a.D * (1.0 + 1e-12) + 1e-12);
  }
}

TEST_CASE("S and D are consistent for every estimate") {
  RandomStream gen(14, 0);
  for (int k = 0; k < 1000; ++k) {
    const int d = 1 + k % 3;
    const FeasibleSet set = k % 2 ? FeasibleSet::box(d, 1.0) : FeasibleSet::unconstrained(d);
    Vector x(d), g(d);
    for (int i = 0; i < d; ++i) {
      x[i] = 2.0 * gen.uniform() - 1.0;
      g[i] = gen.normal();
    }
    const double nu = k % 4 == 0 ? 2.0 : 1.01 + 0.99 * gen.uniform();
    const StationarityEstimate e = fbe_at(x, g, set, 1.0 + gen.uniform(), nu, 1e-8);
    CHECK(e.D >= 0.0);
    CHECK(e.S == (e.D == 0.0 ? 0.0 : std::pow(e.D, 2.0 * (nu - 1.0) / nu)));
  }
}

TEST_CASE("FBE argument checks") {
  const FeasibleSet set = FeasibleSet::box(1, 1.0);
  const Vector x = Vector::Zero(1);
  CHECK_THROWS_AS(fbe_at(x, x, set, 0.0, 2.0, 1e-8), ContractViolation);
  CHECK_THROWS_AS(fbe_at(x, x, set, 1.0, 2.5, 1e-8), ContractViolation);
  CHECK_THROWS_AS(fbe_at(x, x, set, 1.0, 2.0, 0.0), ContractViolation);
  CHECK_THROWS_AS(fbe_at(x, x, set, 1.0, 1.5, 1e-8, FBEMethod::closed_form), ContractViolation);
}

TEST_CASE("Moreau envelope examples") {
  ProblemInstance zero;
  zero.dim = 2;
  zero.objective = [](const Vector&) { return 0.0; };
  zero.gradient = [](const Vector& x) { return Vector(Vector::Zero(x.size())); };
  zero.feasible = FeasibleSet::unconstrained(2);
  const MoreauResult z = moreau(zero, vec2(1.0, -2.0), 3.0, 1.5, 1e-10);
  CHECK(z.value == 0.0);
  CHECK(z.proxpoint == vec2(1.0, -2.0));

  const ProblemInstance f = half_square(2, FeasibleSet::unconstrained(2));
  for (double rho : {0.5, 1.0, 4.0}) {
    const Vector x = vec2(3.0, -1.0);
    const MoreauResult m = moreau(f, x, rho, 2.0, 1e-10);
    CHECK((m.proxpoint - rho * x / (1.0 + rho)).norm() < 1e-9);
    CHECK(m.value == doctest::Approx(rho * x.squaredNorm() / (2.0 * (1.0 + rho))).epsilon(1e-10));
    CHECK(m.converged);
  }
}

TEST_CASE("Moreau envelope lies below F and grows with rho") {
  RandomStream gen(15, 0);
  for (int k = 0; k < 100; ++k) {
    const int d = 1 + k % 3;
    const ProblemInstance f = random_convex_box_quadratic(gen, d, 1.0);
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = 2.0 * gen.uniform() - 1.0;
    const double nu = 1.2 + 0.8 * gen.uniform();
    double prev = -std::numeric_limits<double>::infinity();
    for (double rho : {0.5, 1.0, 2.0, 4.0, 8.0}) {
      const MoreauResult m = moreau(f, x, rho, nu, 1e-10, 4.0);
      CHECK(m.value <= f.objective(x));
      CHECK(m.value >= prev - 1e-9);
      CHECK(f.feasible.contains(m.proxpoint));
      prev = m.value;
    }
  }
}

TEST_CASE("criterion examples") {
  const ProblemInstance f = half_square(2, FeasibleSet::unconstrained(2));
  CHECK(criterion_value(f, Vector::Zero(2), Criterion::subopt()) == 0.0);
  CHECK(criterion_value(f, vec2(0.0, 4.0), Criterion::dist_pow(1.5)) == doctest::Approx(8.0));
  CHECK(criterion_value(f, vec2(3.0, 4.0), Criterion::grad_sq()) == doctest::Approx(25.0));
  CHECK(criterion_value(f, vec2(3.0, 4.0), Criterion::subopt_pow(1.0)) ==
        doctest::Approx(std::sqrt(12.5)));
  CHECK(criterion_value(f, vec2(3.0, 4.0), Criterion::grad_pow(1.5)) ==
        doctest::Approx(std::pow(5.0, 1.5)));
  CHECK(criterion_value(f, vec2(3.0, 4.0), Criterion::stationarity(1.0, 1.5)) ==
        doctest::Approx(25.0).epsilon(1e-13));

  ProblemInstance bare = f;
  bare.constants.F_star.reset();
  bare.constants.x_star.reset();
  CHECK_THROWS_WITH_AS(criterion_value(bare, vec2(1, 1), Criterion::subopt()),
                       doctest::Contains("F_star"), ContractViolation);
  CHECK_THROWS_WITH_AS(criterion_value(bare, vec2(1, 1), Criterion::dist_pow(2.0)),
                       doctest::Contains("x_star"), ContractViolation);
}

TEST_CASE("criterion parsing") {
  CHECK(parse_criterion("subopt").kind == Criterion::Kind::subopt);
  CHECK(parse_criterion("grad_sq").kind == Criterion::Kind::grad_sq);
  const Criterion s = parse_criterion("stationarity(2.5,1.5)");
  CHECK(s.kind == Criterion::Kind::stationarity);
  CHECK(s.rho == 2.5);
  CHECK(s.nu == 1.5);
  CHECK(parse_criterion("dist_pow(1.5)").p == 1.5);
  CHECK(parse_criterion(parse_criterion("grad_pow(1.25)").name()).p == 1.25);
  for (const char* bad : {"", "subopt(", "dist_pow()", "dist_pow(3)", "grad_pow(1.5", "stationarity(1)",
                          "stationarity(-1,1.5)", "nope", "dist_pow(1.5x)"}) {
    CHECK_THROWS_AS(parse_criterion(bad), ConfigError);
  }
}

TEST_CASE("step-weighted trajectory criterion") {
  const ProblemInstance f = half_square(1, FeasibleSet::unconstrained(1));
  Trajectory tr;
  tr.iterates = {Vector::Constant(1, 1.0), Vector::Constant(1, 2.0), Vector::Constant(1, 9.0)};
  StepRecord a, b;
  a.step = 1.0;
  b.step = 3.0;
  tr.records = {a, b};
  // (1 * 1 + 3 * 4) / 4
  CHECK(weighted_trajectory_criterion(f, tr, Criterion::grad_sq()) == doctest::Approx(3.25));
}

TEST_CASE("nonconvex preset") {
  const NonconvexPreset c = nonconvex_preset(1.5, 1.0, 1.0);
  CHECK(c.rho == doctest::Approx(12.0));
  CHECK(c.gamma == doctest::Approx(2.0 / 3.0));
  CHECK(nonconvex_preset(2.0, 1.0, 0.0).gamma == doctest::Approx(1.0));
}
