#include "htsgd/measures/envelopes.hpp"

#include <algorithm>
#include <cmath>

#include "htsgd/core/errors.hpp"

namespace htsgd {

std::string to_string(FBEMethod m) {
  switch (m) {
    case FBEMethod::closed_form: return "closed_form";
    case FBEMethod::radial_root: return "radial_root";
    case FBEMethod::projected_descent: return "projected_descent";
  }
  return "unknown";
}

double stationarity_from_fbe(double D, double nu) {
  return D == 0.0 ? 0.0 : std::pow(D, 2.0 * (nu - 1.0) / nu);
}

namespace {

double model_value(const Vector& g, const Vector& z, double rho, double nu) {
  const double n = z.norm();
  return g.dot(z) + (n == 0.0 ? 0.0 : rho / nu * std::pow(n, nu));
}

Vector model_gradient(const Vector& g, const Vector& z, double rho, double nu) {
  const double n = z.norm();
  if (n == 0.0) return g;
  return g + (rho * std::pow(n, nu - 2.0)) * z;
}

double fbe_scale(double rho, double nu) {
  return nu * std::pow(rho, 1.0 / (nu - 1.0)) / (nu - 1.0);
}

StationarityEstimate finish(double min_model, double rho, double nu, double residual,
                            FBEMethod method, bool converged) {
  StationarityEstimate est;
  // y = x gives a model value of 0, so the minimum is never positive
  est.D = -fbe_scale(rho, nu) * std::min(min_model, 0.0);
  if (est.D == 0.0) est.D = 0.0;  // drop a negative zero
  est.S = stationarity_from_fbe(est.D, nu);
  est.subsolver_residual = residual;
  est.method = method;
  est.converged = converged;
  return est;
}

StationarityEstimate fbe_radial_root(const Vector& x, const Vector& g, const FeasibleSet& set,
                                     double rho, double nu) {
  const double gn = g.norm();
  if (gn == 0.0) return finish(0.0, rho, nu, 0.0, FBEMethod::radial_root, true);

  // z(c) = Proj_{X - x}(-c g); the minimizer is z(c*) for the unique root of
  // k(c) = rho c - ||z(c)||^(2-nu).
  // Bounds are per coordinate, so clamp the displacement itself; forming
  // Proj(x - c g) - x loses tiny steps to cancellation.
  auto ray = [&](double c) {
    Vector z(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      z[i] = std::clamp(-c * g[i], set.lower() - x[i], set.upper() - x[i]);
    }
    return z;
  };
  auto k = [&](double c) { return rho * c - std::pow(ray(c).norm(), 2.0 - nu); };

  double hi = std::pow(std::pow(gn, 2.0 - nu) / rho, 1.0 / (nu - 1.0));
  double lo = hi;
  bool bracketed = false;
  for (int i = 0; i < 2000; ++i) {
    lo *= 0.5;
    if (!(lo > 0.0)) break;
    if (k(lo) < 0.0) {
      bracketed = true;
      break;
    }
    hi = lo;
  }
  if (!bracketed) return finish(0.0, rho, nu, 0.0, FBEMethod::radial_root, true);

  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;
    (k(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  const Vector z_lo = ray(lo);
  const Vector z_hi = ray(hi);
  const double m_lo = model_value(g, z_lo, rho, nu);
  const double m_hi = model_value(g, z_hi, rho, nu);
  const Vector& z = m_lo <= m_hi ? z_lo : z_hi;
  const double m = std::min(m_lo, m_hi);
  const Vector y = x + z;
  const double residual =
      gradient_mapping_norm(set, y, model_gradient(g, z, rho, nu), 1.0 / rho);
  return finish(m, rho, nu, residual, FBEMethod::radial_root, true);
}

StationarityEstimate fbe_projected(const Vector& x, const Vector& g, const FeasibleSet& set,
                                   double rho, double nu, double tol) {
  SmoothObjective obj;
  obj.value = [&](const Vector& y) { return model_value(g, y - x, rho, nu); };
  obj.gradient = [&](const Vector& y) { return model_gradient(g, y - x, rho, nu); };
  // start away from the kink at y = x
  const Vector start = set.project(gradient_step(x, 1.0 / rho, g));
  SubsolverOptions opt;
  opt.tol = tol;
  opt.initial_lipschitz = rho;
  const SubsolverResult r = minimize_projected(obj, set, start, opt);
  return finish(r.value, rho, nu, r.residual, FBEMethod::projected_descent, r.converged);
}

}  // namespace

StationarityEstimate fbe_at(const Vector& x, const Vector& g, const FeasibleSet& set, double rho,
                            double nu, double tol, FBEMethod method) {
  require(rho > 0.0, "fbe: rho must be positive");
  require(nu > 1.0 && nu <= 2.0, "fbe: nu must lie in (1, 2]");
  require(tol > 0.0, "fbe: tol must be positive");
  require(x.size() == g.size(), "fbe: gradient dimension differs from x");
  switch (method) {
    case FBEMethod::closed_form: {
      require(set.kind() == FeasibleSet::Kind::unconstrained || nu == 2.0,
              "fbe: closed form needs an unconstrained set or nu = 2");
      if (set.kind() == FeasibleSet::Kind::unconstrained) {
        const double gn = g.norm();
        StationarityEstimate est;
        est.D = gn == 0.0 ? 0.0 : std::pow(gn, nu / (nu - 1.0));
        est.S = stationarity_from_fbe(est.D, nu);
        est.method = FBEMethod::closed_form;
        return est;
      }
      const Vector z = set.project(gradient_step(x, 1.0 / rho, g)) - x;
      const Vector y = x + z;
      const double residual =
          gradient_mapping_norm(set, y, model_gradient(g, z, rho, nu), 1.0 / rho);
      return finish(model_value(g, z, rho, nu), rho, nu, residual, FBEMethod::closed_form, true);
    }
    case FBEMethod::radial_root: return fbe_radial_root(x, g, set, rho, nu);
    case FBEMethod::projected_descent: return fbe_projected(x, g, set, rho, nu, tol);
  }
  return {};
}

StationarityEstimate fbe_at(const Vector& x, const Vector& g, const FeasibleSet& set, double rho,
                            double nu, double tol) {
  if (set.kind() == FeasibleSet::Kind::unconstrained || nu == 2.0) {
    return fbe_at(x, g, set, rho, nu, tol, FBEMethod::closed_form);
  }
  return fbe_at(x, g, set, rho, nu, tol, FBEMethod::radial_root);
}

StationarityEstimate fbe(const FBEQuery& query, double tol) {
  require(query.problem != nullptr, "fbe: query has no problem");
  return fbe_at(query.x, query.problem->gradient(query.x), query.problem->feasible, query.rho,
                query.nu, tol);
}

MoreauResult moreau(const ProblemInstance& problem, const Vector& x, double rho, double nu,
                    double tol, double curvature) {
  require(rho > 0.0, "moreau: rho must be positive");
  require(nu > 1.0 && nu <= 2.0, "moreau: nu must lie in (1, 2]");
  require(tol > 0.0, "moreau: tol must be positive");
  SmoothObjective obj;
  obj.value = [&](const Vector& y) {
    const double n = (y - x).norm();
    return problem.objective(y) + (n == 0.0 ? 0.0 : rho / nu * std::pow(n, nu));
  };
  obj.gradient = [&](const Vector& y) {
    const Vector z = y - x;
    const double n = z.norm();
    Vector g = problem.gradient(y);
    if (n > 0.0) g += (rho * std::pow(n, nu - 2.0)) * z;
    return g;
  };
  SubsolverOptions opt;
  opt.tol = tol;
  opt.initial_lipschitz = std::max(curvature, 0.0) + rho;
  const SubsolverResult r = minimize_projected(obj, problem.feasible, x, opt);

  MoreauResult out;
  const double at_x = problem.objective(x);
  if (r.value <= at_x) {
    out.value = r.value;
    out.proxpoint = r.y;
  } else {
    out.value = at_x;
    out.proxpoint = problem.feasible.project(x);
  }
  out.residual = r.residual;
  out.converged = r.converged;
  return out;
}

}  // namespace htsgd
