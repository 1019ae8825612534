#pragma once

#include <string>

#include "htsgd/core/vector.hpp"

namespace htsgd {

/// Deterministic step sizes eta_t, t >= 1.
class StepSchedule {
 public:
  enum class Kind { constant, polynomial, harmonic_sc };

  static StepSchedule constant(double eta);
  /// eta * t^(-r)
  static StepSchedule polynomial(double eta, double r);
  /// c / (mu t)
  static StepSchedule harmonic_sc(double mu, double c = 2.0);

  double at(long t) const;
  double operator()(long t) const { return at(t); }
  Kind kind() const noexcept { return kind_; }
  std::string describe() const;

 private:
  StepSchedule(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

/// Clipping thresholds lambda_t, t >= 1.
class ClipSchedule {
 public:
  enum class Kind { constant, polynomial };

  static ClipSchedule constant(double lambda);
  /// lambda * t^q
  static ClipSchedule polynomial(double lambda, double q);

  double at(long t) const;
  double operator()(long t) const { return at(t); }
  Kind kind() const noexcept { return kind_; }
  std::string describe() const;

 private:
  ClipSchedule(Kind kind, double lambda, double q) : kind_(kind), lambda_(lambda), q_(q) {}
  Kind kind_;
  double lambda_;
  double q_;
};

/// v * min{1, lambda / ||v||}. Returns v unchanged (bitwise) when ||v|| <= lambda.
Vector clip(const Vector& v, double lambda, bool* active = nullptr);

/// Constant step ||x_1 - x*|| / (G T^(1/p)) that balances the two terms of the
/// convex bound.
double tuned_convex_step(double distance, double G, double p, long T);

}  // namespace htsgd
