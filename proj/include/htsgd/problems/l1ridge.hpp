#pragma once

#include <cstdint>

#include "htsgd/core/problem.hpp"

namespace htsgd {

/// F(x) = ||Ax - b||_1 + (mu/2)||x||^2 over the box |x_i| <= R, with a
/// subgradient oracle perturbed by two-sided Pareto noise.
struct L1RidgeProblem {
  Matrix A;
  Vector b;
  double mu = 0.0;
  double R = 10.0;
  double alpha = 2.0;
};

/// A and b with i.i.d. standard normal entries drawn from `seed`.
L1RidgeProblem make_l1ridge_data(std::uint64_t seed, int d, double mu, double R, double alpha);

double l1ridge_objective(const L1RidgeProblem& prob, const Vector& x);
/// A^T sign(Ax - b) + mu x with sign(0) = 0.
Vector l1ridge_subgradient(const L1RidgeProblem& prob, const Vector& x);

/// Moment order used when none is given: alpha - 0.05 below 2, else 2.
double default_moment_order(double alpha);

/// Bound on (E||oracle||^p)^(1/p) over the box: max ||A^T s|| over sign
/// vectors plus mu R sqrt(d) plus the Pareto p-th moment bound. Infinite if
/// p >= alpha.
double l1ridge_gradient_bound(const L1RidgeProblem& prob, double p);

enum class ReferenceMethod { primal_dual, subgradient };

struct ReferenceOptions {
  ReferenceMethod method = ReferenceMethod::primal_dual;
  long max_iterations = 1000000;
  /// Ratio sigma/tau of the primal-dual steps; their product is fixed by ||A||.
  double step_ratio = 1.0;
  /// Scale c of the subgradient steps c / sqrt(t).
  double subgradient_scale = 1.0;
};

struct ReferenceSolution {
  Vector x_star;
  double F_star = 0.0;
  long iterations = 0;
  /// Certified duality gap for the primal-dual method; last stall measure
  /// for the subgradient method.
  double gap = 0.0;
};

/// Deterministic minimization of F over the box. The primal-dual method stops
/// once its duality gap is at most tol; the subgradient method stops once the
/// best value has not moved by more than tol over a window of iterations.
/// Throws SolverError carrying the best value on hitting the iteration cap.
ReferenceSolution solve_reference(const L1RidgeProblem& prob, double tol,
                                  const ReferenceOptions& options = {});

/// Full instance: objective, subgradient, noisy oracle, box, constants
/// (p, G, sigma, mu, F*, x*), and starting point 100 * ones(d).
ProblemInstance make_l1ridge(const L1RidgeProblem& prob, double p, double reference_tol = 1e-9);
/// Same with a reference solution computed beforehand.
ProblemInstance make_l1ridge(const L1RidgeProblem& prob, double p, const ReferenceSolution& ref);
ProblemInstance make_l1ridge(std::uint64_t seed, int d, double mu, double R, double alpha);

}  // namespace htsgd
