#include "htsgd/optimizers/schedules.hpp"

#include <cmath>
#include <sstream>

#include "htsgd/core/errors.hpp"

namespace htsgd {

StepSchedule StepSchedule::constant(double eta) {
  require(eta > 0.0 && std::isfinite(eta), "StepSchedule::constant: eta must be positive");
  return StepSchedule(Kind::constant, eta, 0.0);
}

StepSchedule StepSchedule::polynomial(double eta, double r) {
  require(eta > 0.0 && std::isfinite(eta), "StepSchedule::polynomial: eta must be positive");
  require(std::isfinite(r), "StepSchedule::polynomial: r must be finite");
  return StepSchedule(Kind::polynomial, eta, r);
}

StepSchedule StepSchedule::harmonic_sc(double mu, double c) {
  require(mu > 0.0, "StepSchedule::harmonic_sc: mu must be positive");
  require(c > 0.0, "StepSchedule::harmonic_sc: c must be positive");
  return StepSchedule(Kind::harmonic_sc, mu, c);
}

double StepSchedule::at(long t) const {
  require(t >= 1, "StepSchedule: index starts at 1");
  switch (kind_) {
    case Kind::constant: return a_;
    case Kind::polynomial: return b_ == 0.0 ? a_ : a_ * std::pow(double(t), -b_);
    case Kind::harmonic_sc: return b_ / (a_ * double(t));
  }
  return a_;
}

std::string StepSchedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << "constant(eta=" << a_ << ")"; break;
    case Kind::polynomial: os << "polynomial(eta=" << a_ << ",r=" << b_ << ")"; break;
    case Kind::harmonic_sc: os << "harmonic_sc(mu=" << a_ << ",c=" << b_ << ")"; break;
  }
  return os.str();
}

ClipSchedule ClipSchedule::constant(double lambda) {
  require(lambda > 0.0, "ClipSchedule::constant: lambda must be positive");
  return ClipSchedule(Kind::constant, lambda, 0.0);
}

ClipSchedule ClipSchedule::polynomial(double lambda, double q) {
  require(lambda > 0.0, "ClipSchedule::polynomial: lambda must be positive");
  return ClipSchedule(Kind::polynomial, lambda, q);
}

double ClipSchedule::at(long t) const {
  require(t >= 1, "ClipSchedule: index starts at 1");
  if (kind_ == Kind::constant || q_ == 0.0) return lambda_;
  return lambda_ * std::pow(double(t), q_);
}

std::string ClipSchedule::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::constant) os << "constant(lambda=" << lambda_ << ")";
  else os << "polynomial(lambda=" << lambda_ << ",q=" << q_ << ")";
  return os.str();
}

Vector clip(const Vector& v, double lambda, bool* active) {
  const double n = v.norm();
  const bool on = n > lambda;
  if (active) *active = on;
  if (!on) return v;
  return v * (lambda / n);
}

double tuned_convex_step(double distance, double G, double p, long T) {
  require(distance > 0.0 && G > 0.0 && std::isfinite(G),
          "tuned_convex_step: distance and G must be positive and finite");
  require(T >= 1, "tuned_convex_step: T must be positive");
  return distance / (G * std::pow(double(T), 1.0 / p));
}

}  // namespace htsgd
