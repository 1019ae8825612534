#include "htsgd/measures/criteria.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "htsgd/core/errors.hpp"

namespace htsgd {

std::string Criterion::name() const {
  char buf[96];
  switch (kind) {
    case Kind::subopt: return "subopt";
    case Kind::subopt_pow: std::snprintf(buf, sizeof buf, "subopt_pow(%g)", p); return buf;
    case Kind::dist_pow: std::snprintf(buf, sizeof buf, "dist_pow(%g)", p); return buf;
    case Kind::grad_sq: return "grad_sq";
    case Kind::grad_pow: std::snprintf(buf, sizeof buf, "grad_pow(%g)", p); return buf;
    case Kind::stationarity:
      std::snprintf(buf, sizeof buf, "stationarity(%g,%g)", rho, nu);
      return buf;
  }
  return "unknown";
}

namespace {

std::vector<double> parse_args(const std::string& text, std::size_t open) {
  std::vector<double> out;
  const std::size_t close = text.find(')', open);
  if (close == std::string::npos || close != text.size() - 1) {
    throw ConfigError("criterion '" + text + "': missing closing parenthesis");
  }
  std::string body = text.substr(open + 1, close - open - 1);
  std::size_t start = 0;
  while (start <= body.size()) {
    const std::size_t comma = body.find(',', start);
    const std::string tok = body.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end == tok.c_str() || *end != '\0') {
      throw ConfigError("criterion '" + text + "': bad number '" + tok + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double require_pow(const std::string& text, const std::vector<double>& args) {
  if (args.size() != 1 || !(args[0] > 1.0 && args[0] <= 2.0)) {
    throw ConfigError("criterion '" + text + "': expects one exponent in (1, 2]");
  }
  return args[0];
}

}  // namespace

Criterion parse_criterion(const std::string& text) {
  const std::size_t open = text.find('(');
  const std::string head = text.substr(0, open);
  if (open == std::string::npos) {
    if (head == "subopt") return Criterion::subopt();
    if (head == "grad_sq") return Criterion::grad_sq();
    throw ConfigError("unknown criterion '" + text + "'");
  }
  const auto args = parse_args(text, open);
  if (head == "subopt_pow") return Criterion::subopt_pow(require_pow(text, args));
  if (head == "dist_pow") return Criterion::dist_pow(require_pow(text, args));
  if (head == "grad_pow") return Criterion::grad_pow(require_pow(text, args));
  if (head == "stationarity") {
    if (args.size() != 2 || !(args[0] > 0.0) || !(args[1] > 1.0 && args[1] <= 2.0)) {
      throw ConfigError("criterion '" + text + "': expects (rho > 0, nu in (1, 2])");
    }
    return Criterion::stationarity(args[0], args[1]);
  }
  throw ConfigError("unknown criterion '" + text + "'");
}

double criterion_value(const ProblemInstance& problem, const Vector& x, const Criterion& c,
                       double tol) {
  const auto& k = problem.constants;
  switch (c.kind) {
    case Criterion::Kind::subopt:
    case Criterion::Kind::subopt_pow: {
      require(k.F_star.has_value(), "criterion " + c.name() + ": instance has no F_star");
      const double gap = std::max(problem.objective(x) - *k.F_star, 0.0);
      if (c.kind == Criterion::Kind::subopt) return gap;
      return gap == 0.0 ? 0.0 : std::pow(gap, c.p / 2.0);
    }
    case Criterion::Kind::dist_pow:
      require(k.x_star.has_value(), "criterion " + c.name() + ": instance has no x_star");
      return norm_p_power(x - *k.x_star, c.p);
    case Criterion::Kind::grad_sq: return problem.gradient(x).squaredNorm();
    case Criterion::Kind::grad_pow: return norm_p_power(problem.gradient(x), c.p);
    case Criterion::Kind::stationarity:
      return fbe(FBEQuery{c.rho, c.nu, x, &problem}, tol).S;
  }
  return 0.0;
}

double weighted_trajectory_criterion(const ProblemInstance& problem, const Trajectory& traj,
                                     const Criterion& c, double tol) {
  require(!traj.records.empty(), "weighted_trajectory_criterion: empty trajectory");
  double acc = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < traj.records.size() && i < traj.iterates.size(); ++i) {
    const double eta = traj.records[i].step;
    acc += eta * criterion_value(problem, traj.iterates[i], c, tol);
    weight += eta;
  }
  return acc / weight;
}

NonconvexPreset nonconvex_preset(double p, double L, double ell) {
  require(p > 1.0 && p <= 2.0, "nonconvex_preset: p must lie in (1, 2]");
  return {2.0 * (L + 2.0 * ell) / (p - 1.0), 2.0 * (p - 1.0) / p};
}

}  // namespace htsgd
