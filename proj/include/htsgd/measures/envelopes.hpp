#pragma once

#include "htsgd/core/problem.hpp"
#include "htsgd/measures/subsolver.hpp"

namespace htsgd {

enum class FBEMethod { closed_form, radial_root, projected_descent };

std::string to_string(FBEMethod m);

struct FBEQuery {
  double rho = 1.0;
  double nu = 2.0;
  Vector x;
  const ProblemInstance* problem = nullptr;
};

struct StationarityEstimate {
  double D = 0.0;  // envelope value, >= 0
  double S = 0.0;  // D^(2(nu-1)/nu)
  double subsolver_residual = 0.0;
  FBEMethod method = FBEMethod::closed_form;
  /// False when an iterative path stopped at its cap above tolerance.
  bool converged = true;
};

/// Forward-backward envelope
///   D = -(nu rho^(1/(nu-1)) / (nu-1)) * min_y <g, y-x> + (rho/nu)||y-x||^nu
/// over the feasible set. Unconstrained sets use the closed form
/// ||g||^(nu/(nu-1)); nu = 2 uses the explicit projection; nu < 2 solves the
/// scalar fixed-point equation for the minimizer along the projected ray.
StationarityEstimate fbe(const FBEQuery& query, double tol = 1e-6);

/// Same with the gradient supplied and an optional forced method.
StationarityEstimate fbe_at(const Vector& x, const Vector& gradient, const FeasibleSet& set,
                            double rho, double nu, double tol, FBEMethod method);
StationarityEstimate fbe_at(const Vector& x, const Vector& gradient, const FeasibleSet& set,
                            double rho, double nu, double tol);

/// D^(2(nu-1)/nu).
double stationarity_from_fbe(double D, double nu);

struct MoreauResult {
  double value = 0.0;
  Vector proxpoint;
  double residual = 0.0;
  bool converged = true;
};

/// min_y F(y) + (rho/nu)||y - x||^nu over the feasible set. `curvature` is an
/// upper bound on the Hessian of F used to seed the step size; the result is
/// never worse than y = x.
MoreauResult moreau(const ProblemInstance& problem, const Vector& x, double rho, double nu,
                    double tol = 1e-6, double curvature = 1.0);

}  // namespace htsgd
