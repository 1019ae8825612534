#include "htsgd/problems/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "htsgd/core/errors.hpp"

namespace htsgd {

double quadratic_objective(const QuadraticProblem& q, const Vector& y) {
  return 0.5 * y.dot(q.H * y) + q.c.dot(y);
}

Vector quadratic_gradient(const QuadraticProblem& q, const Vector& y) { return q.H * y + q.c; }

double quadratic_max_curvature(const QuadraticProblem& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(q.H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double quadratic_min_curvature(const QuadraticProblem& q) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(q.H, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double quadratic_upper_holder(const QuadraticProblem& q, double nu, double diameter) {
  return nu * std::max(quadratic_max_curvature(q), 0.0) * std::pow(diameter, 2.0 - nu) / 2.0;
}

double quadratic_lower_holder(const QuadraticProblem& q, double nu, double diameter) {
  return nu * std::max(-quadratic_min_curvature(q), 0.0) * std::pow(diameter, 2.0 - nu) / 2.0;
}

ProblemInstance make_quadratic(const QuadraticProblem& q, const Vector& x1) {
  const int d = int(q.c.size());
  require(q.H.rows() == d && q.H.cols() == d, "make_quadratic: H and c dimensions differ");
  require(q.feasible.dim() == d, "make_quadratic: feasible set dimension differs");
  require(x1.size() == d, "make_quadratic: starting point dimension differs");
  ProblemInstance p;
  p.name = "quadratic";
  p.dim = d;
  p.objective = [q](const Vector& y) { return quadratic_objective(q, y); };
  p.gradient = [q](const Vector& y) { return quadratic_gradient(q, y); };
  if (q.noise_alpha) {
    const ParetoNoise noise = make_pareto(*q.noise_alpha, d);
    p.oracle = [q, noise](const Vector& y, RandomStream& rng, const OracleQuery&) {
      Vector g = quadratic_gradient(q, y);
      g += sample_pareto(noise, rng);
      return g;
    };
  } else {
    p.oracle = deterministic_oracle(p.gradient);
  }
  p.feasible = q.feasible;
  p.initial_point = x1;

  auto& c = p.constants;
  const double lmax = quadratic_max_curvature(q);
  const double lmin = quadratic_min_curvature(q);
  c.nu = 2.0;
  c.L_nu = std::max(lmax, 0.0);
  c.ell_nu = std::max(-lmin, 0.0);
  c.mu = std::max(lmin, 0.0);
  if (q.noise_alpha) {
    c.p = *q.noise_alpha < 2.0 ? *q.noise_alpha - 0.05 : 2.0;
    if (c.p < *q.noise_alpha) {
      c.sigma = std::pow(pareto_vector_moment_bound(*q.noise_alpha, c.p, d), 1.0 / c.p);
    } else {
      c.sigma = std::numeric_limits<double>::infinity();
    }
  }
  if (q.feasible.kind() == FeasibleSet::Kind::unconstrained && lmin > 0.0) {
    const Vector xs = q.H.ldlt().solve(-q.c);
    c.x_star = xs;
    c.F_star = quadratic_objective(q, xs);
  }
  return p;
}

ProblemInstance make_isotropic_quadratic(int dim, double alpha, const Vector& x1) {
  QuadraticProblem q;
  q.H = Matrix::Identity(dim, dim);
  q.c = Vector::Zero(dim);
  q.feasible = FeasibleSet::unconstrained(dim);
  if (alpha > 0.0) q.noise_alpha = alpha;
  return make_quadratic(q, x1);
}

}  // namespace htsgd
