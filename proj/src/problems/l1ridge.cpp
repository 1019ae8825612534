#include "htsgd/problems/l1ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "htsgd/core/errors.hpp"
#include "htsgd/noise/noise.hpp"

namespace htsgd {

namespace {

constexpr std::uint64_t kDataStream = 0x4c31524944474500ull;

double sign0(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double spectral_norm(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

// min over |x| <= R of c x + (mu/2) x^2
double box_conjugate_term(double c, double mu, double R) {
  const double ac = std::abs(c);
  if (mu > 0.0 && ac <= mu * R) return -c * c / (2.0 * mu);
  return -ac * R + 0.5 * mu * R * R;
}

double dual_value(const L1RidgeProblem& prob, const Vector& w) {
  const Vector c = prob.A.transpose() * w;
  double v = -w.dot(prob.b);
  for (Eigen::Index i = 0; i < c.size(); ++i) v += box_conjugate_term(c[i], prob.mu, prob.R);
  return v;
}

Vector clamp_box(const Vector& x, double R) { return x.cwiseMax(-R).cwiseMin(R); }

ReferenceSolution solve_primal_dual(const L1RidgeProblem& prob, double tol,
                                    const ReferenceOptions& opt) {
  const Eigen::Index d = prob.A.cols();
  const double normA = std::max(spectral_norm(prob.A), 1e-12);
  const double ratio = opt.step_ratio;
  const double tau = 0.99 / (normA * std::sqrt(ratio));
  const double sigma = ratio * tau;

  Vector x = Vector::Zero(d);
  Vector xbar = x;
  Vector w = Vector::Zero(prob.A.rows());
  Vector best_x = x;
  double best_primal = l1ridge_objective(prob, x);
  double best_dual = dual_value(prob, w);

  constexpr long kCheckEvery = 16;
  for (long k = 1; k <= opt.max_iterations; ++k) {
    w = (w + sigma * (prob.A * xbar - prob.b)).cwiseMax(-1.0).cwiseMin(1.0);
    const Vector x_new = clamp_box((x - tau * (prob.A.transpose() * w)) / (1.0 + tau * prob.mu),
                                   prob.R);
    xbar = 2.0 * x_new - x;
    x = x_new;
    if (k % kCheckEvery != 0) continue;
    const double pv = l1ridge_objective(prob, x);
    if (pv < best_primal) {
      best_primal = pv;
      best_x = x;
    }
    best_dual = std::max(best_dual, dual_value(prob, w));
    if (best_primal - best_dual <= tol) {
      return {best_x, best_primal, k, best_primal - best_dual};
    }
  }
  throw SolverError("solve_reference: primal-dual gap above tolerance after " +
                        std::to_string(opt.max_iterations) + " iterations",
                    best_primal);
}

ReferenceSolution solve_subgradient(const L1RidgeProblem& prob, double tol,
                                    const ReferenceOptions& opt) {
  const Eigen::Index d = prob.A.cols();
  Vector x = Vector::Zero(d);
  Vector best_x = x;
  double best = l1ridge_objective(prob, x);
  constexpr long kWindow = 10000;
  double window_start = best;
  for (long t = 1; t <= opt.max_iterations; ++t) {
    const Vector g = l1ridge_subgradient(prob, x);
    const double gn = g.norm();
    if (gn == 0.0) return {x, l1ridge_objective(prob, x), t, 0.0};
    x = clamp_box(x - (opt.subgradient_scale / std::sqrt(double(t))) * (g / gn), prob.R);
    const double v = l1ridge_objective(prob, x);
    if (v < best) {
      best = v;
      best_x = x;
    }
    if (t % kWindow == 0) {
      const double moved = window_start - best;
      if (moved < tol) return {best_x, best, t, moved};
      window_start = best;
    }
  }
  throw SolverError("solve_reference: subgradient method did not stall within " +
                        std::to_string(opt.max_iterations) + " iterations",
                    best);
}

}  // namespace

L1RidgeProblem make_l1ridge_data(std::uint64_t seed, int d, double mu, double R, double alpha) {
  require(d >= 1, "make_l1ridge: d must be at least 1");
  require(R > 0.0, "make_l1ridge: R must be positive");
  require(mu >= 0.0, "make_l1ridge: mu must be nonnegative");
  require(alpha > 1.0 && alpha <= 2.0, "make_l1ridge: alpha must lie in (1, 2]");
  RandomStream rng(seed, kDataStream);
  L1RidgeProblem prob;
  prob.A.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) prob.A(i, j) = rng.normal();
  prob.b.resize(d);
  for (int i = 0; i < d; ++i) prob.b[i] = rng.normal();
  prob.mu = mu;
  prob.R = R;
  prob.alpha = alpha;
  return prob;
}

double l1ridge_objective(const L1RidgeProblem& prob, const Vector& x) {
  return (prob.A * x - prob.b).lpNorm<1>() + 0.5 * prob.mu * x.squaredNorm();
}

Vector l1ridge_subgradient(const L1RidgeProblem& prob, const Vector& x) {
  Vector s = prob.A * x - prob.b;
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = sign0(s[i]);
  return prob.A.transpose() * s + prob.mu * x;
}

double default_moment_order(double alpha) { return alpha < 2.0 ? alpha - 0.05 : 2.0; }

double l1ridge_gradient_bound(const L1RidgeProblem& prob, double p) {
  if (!(p < prob.alpha)) return std::numeric_limits<double>::infinity();
  const Eigen::Index n = prob.A.rows();
  const Eigen::Index d = prob.A.cols();
  double max_sub = 0.0;
  if (n <= 16) {
    Vector s(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      for (Eigen::Index i = 0; i < n; ++i) s[i] = (mask >> i) & 1u ? 1.0 : -1.0;
      max_sub = std::max(max_sub, (prob.A.transpose() * s).norm());
    }
  } else {
    max_sub = spectral_norm(prob.A) * std::sqrt(double(n));
  }
  const double noise = std::pow(pareto_vector_moment_bound(prob.alpha, p, int(d)), 1.0 / p);
  return max_sub + prob.mu * prob.R * std::sqrt(double(d)) + noise;
}

ReferenceSolution solve_reference(const L1RidgeProblem& prob, double tol,
                                  const ReferenceOptions& options) {
  require(tol > 0.0, "solve_reference: tol must be positive");
  if (options.method == ReferenceMethod::subgradient) return solve_subgradient(prob, tol, options);
  return solve_primal_dual(prob, tol, options);
}

ProblemInstance make_l1ridge(const L1RidgeProblem& prob, double p, double reference_tol) {
  return make_l1ridge(prob, p, solve_reference(prob, reference_tol));
}

ProblemInstance make_l1ridge(const L1RidgeProblem& prob, double p, const ReferenceSolution& ref) {
  require(p > 1.0 && p <= 2.0, "make_l1ridge: p must lie in (1, 2]");
  const int d = int(prob.A.cols());
  require(ref.x_star.size() == d, "make_l1ridge: reference solution has wrong dimension");

  ProblemInstance inst;
  inst.name = "l1ridge";
  inst.dim = d;
  inst.objective = [prob](const Vector& x) { return l1ridge_objective(prob, x); };
  inst.gradient = [prob](const Vector& x) { return l1ridge_subgradient(prob, x); };
  const ParetoNoise noise = make_pareto(prob.alpha, d);
  inst.oracle = [prob, noise](const Vector& x, RandomStream& rng, const OracleQuery&) {
    Vector g = l1ridge_subgradient(prob, x);
    g += sample_pareto(noise, rng);
    return g;
  };
  inst.feasible = FeasibleSet::box(d, prob.R);
  inst.initial_point = Vector::Constant(d, 100.0);

  auto& c = inst.constants;
  c.p = p;
  c.G = l1ridge_gradient_bound(prob, p);
  c.sigma = p < prob.alpha ? std::pow(pareto_vector_moment_bound(prob.alpha, p, d), 1.0 / p)
                           : std::numeric_limits<double>::infinity();
  c.mu = prob.mu;
  c.nu = 2.0;
  c.F_star = ref.F_star;
  c.x_star = ref.x_star;
  c.Delta1 = l1ridge_objective(prob, inst.feasible.project(inst.initial_point)) - ref.F_star;
  return inst;
}

ProblemInstance make_l1ridge(std::uint64_t seed, int d, double mu, double R, double alpha) {
  return make_l1ridge(make_l1ridge_data(seed, d, mu, R, alpha), default_moment_order(alpha));
}

}  // namespace htsgd
