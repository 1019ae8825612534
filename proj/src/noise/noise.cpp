#include "htsgd/noise/noise.hpp"

#include <cmath>
#include <numbers>

#include "htsgd/core/errors.hpp"

namespace htsgd {

ParetoNoise make_pareto(double alpha, int dim) {
  require(alpha > 0.0, "ParetoNoise: alpha must be positive");
  require(dim >= 1, "ParetoNoise: dim must be at least 1");
  return {alpha, dim};
}

StableNoise make_stable(double alpha) {
  require(alpha > 1.0 && alpha <= 2.0, "StableNoise: alpha must lie in (1, 2]");
  return {alpha};
}

double pareto_coordinate(double alpha, double u, double s) { return s * std::pow(u, -1.0 / alpha); }

Vector sample_pareto(const ParetoNoise& noise, RandomStream& rng) {
  Vector xi(noise.dim);
  for (int i = 0; i < noise.dim; ++i) {
    const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double u = rng.uniform();
    xi[i] = pareto_coordinate(noise.alpha, u, s);
  }
  return xi;
}

double stable_transform(double alpha, double angle, double exponential) {
  const double a = alpha * angle;
  const double c = std::cos(angle);
  return std::sin(a) / std::pow(c, 1.0 / alpha) *
         std::pow(std::cos(angle - a) / exponential, (1.0 - alpha) / alpha);
}

double sample_stable(const StableNoise& noise, RandomStream& rng) {
  const double angle = std::numbers::pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  return stable_transform(noise.alpha, angle, w);
}

double empirical_moment(const std::vector<Vector>& samples, const Vector& center, double p) {
  require(!samples.empty(), "empirical_moment: sample list is empty");
  require(p > 1.0 && p <= 2.0, "empirical_moment: p must lie in (1, 2]");
  double acc = 0.0;
  for (const auto& s : samples) {
    require(s.size() == center.size(), "empirical_moment: dimension mismatch");
    acc += norm_p_power(s - center, p);
  }
  return acc / double(samples.size());
}

double pareto_raw_moment(double alpha, double p) {
  if (!(p < alpha)) {
    throw ContractViolation("pareto_raw_moment: moment of order p=" + std::to_string(p) +
                            " is infinite for tail index alpha=" + std::to_string(alpha));
  }
  return alpha / (alpha - p);
}

double pareto_vector_moment_bound(double alpha, double p, int dim) {
  return double(dim) * pareto_raw_moment(alpha, p);
}

double estimate_stable_moment(double alpha, double p, long samples, RandomStream& rng) {
  if (alpha < 2.0 && !(p < alpha)) {
    throw ContractViolation("estimate_stable_moment: moment of order p is infinite for p >= alpha");
  }
  require(samples >= 1, "estimate_stable_moment: need at least one sample");
  const StableNoise noise = make_stable(alpha);
  double acc = 0.0;
  for (long i = 0; i < samples; ++i) acc += std::pow(std::abs(sample_stable(noise, rng)), p);
  return acc / double(samples);
}

double stable_tail_constant(double alpha) {
  return std::tgamma(alpha) * std::sin(std::numbers::pi * alpha / 2.0) / std::numbers::pi;
}

}  // namespace htsgd
