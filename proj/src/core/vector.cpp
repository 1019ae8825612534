#include "htsgd/core/vector.hpp"

#include <cmath>

#include "htsgd/core/errors.hpp"

namespace htsgd {

double norm_p_power(const Vector& x, double p) {
  require(p > 1.0 && p <= 2.0, "norm_p_power: p must lie in (1, 2]");
  const double n = x.norm();
  if (n == 0.0) return 0.0;
  return std::pow(n, p);
}

bool all_finite(const Vector& x) { return x.allFinite(); }

Vector gradient_step(const Vector& x, double step, const Vector& g) {
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = x[i] - step * g[i];
  return y;
}

}  // namespace htsgd
