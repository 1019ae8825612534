#pragma once

#include <functional>
#include <optional>
#include <string>

#include "htsgd/core/feasible_set.hpp"
#include "htsgd/core/random_stream.hpp"
#include "htsgd/core/vector.hpp"

namespace htsgd {

/// Known constants of an instance. Absent optionals mean "unknown".
struct ProblemConstants {
  double p = 2.0;       // moment order
  double G = 0.0;       // raw-moment bound on the oracle
  double sigma = 0.0;   // central-moment bound on the oracle
  double mu = 0.0;      // strong convexity
  double nu = 2.0;      // Holder exponent of the gradient
  double L_nu = 0.0;    // upper Holder constant
  double ell_nu = 0.0;  // lower Holder constant
  std::optional<double> F_star;
  std::optional<Vector> x_star;
  std::optional<double> Delta1;
};

/// What the oracle is told about the current step. Step-adversarial oracles
/// read `step`; ordinary ones ignore the query entirely.
struct OracleQuery {
  long t = 1;
  double step = 0.0;
};

using Objective = std::function<double(const Vector&)>;
using Gradient = std::function<Vector(const Vector&)>;
using Oracle = std::function<Vector(const Vector&, RandomStream&, const OracleQuery&)>;

struct ProblemInstance {
  std::string name;
  int dim = 1;
  Objective objective;
  Gradient gradient;
  Oracle oracle;
  FeasibleSet feasible = FeasibleSet::unconstrained(1);
  ProblemConstants constants;
  Vector initial_point;
};

/// Oracle that returns the true gradient and consumes no randomness.
Oracle deterministic_oracle(Gradient gradient);

/// Wraps an oracle so every call bumps *counter.
Oracle counting_oracle(Oracle inner, long* counter);

}  // namespace htsgd
