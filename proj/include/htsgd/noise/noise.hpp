#pragma once

#include <vector>

#include "htsgd/core/random_stream.hpp"
#include "htsgd/core/vector.hpp"

namespace htsgd {

/// Two-sided Pareto coordinates s * u^(-1/alpha). Every coordinate has
/// magnitude at least 1. Consumes two uniforms per coordinate (sign, then u).
struct ParetoNoise {
  double alpha;
  int dim;
};

/// Symmetric alpha-stable law with characteristic function exp(-|s|^alpha).
/// Consumes two uniforms per draw (angle, then exponential).
struct StableNoise {
  double alpha;
};

ParetoNoise make_pareto(double alpha, int dim);
StableNoise make_stable(double alpha);

Vector sample_pareto(const ParetoNoise& noise, RandomStream& rng);
/// Single Pareto coordinate from explicit draws.
double pareto_coordinate(double alpha, double u, double s);

double sample_stable(const StableNoise& noise, RandomStream& rng);
/// Chambers-Mallows-Stuck transform of an angle in (-pi/2, pi/2) and a
/// rate-one exponential.
double stable_transform(double alpha, double angle, double exponential);

/// Mean of ||sample - center||^p.
double empirical_moment(const std::vector<Vector>& samples, const Vector& center, double p);

/// Closed-form E|s u^(-1/alpha)|^p = alpha / (alpha - p). Throws
/// ContractViolation when p >= alpha since the moment is infinite.
double pareto_raw_moment(double alpha, double p);

/// Upper bound d * alpha / (alpha - p) on E||xi||^p for a d-vector of
/// independent Pareto coordinates (subadditivity of t -> t^(p/2)).
double pareto_vector_moment_bound(double alpha, double p, int dim);

/// Monte-Carlo estimate of E|xi|^p for the stable law, used where a
/// closed-form constant is not trusted. Throws when p >= alpha < 2.
double estimate_stable_moment(double alpha, double p, long samples, RandomStream& rng);

/// Limit of P(xi > z) z^alpha for the stable law, alpha < 2.
double stable_tail_constant(double alpha);

}  // namespace htsgd
