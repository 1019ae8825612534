#pragma once

#include <optional>
#include <string>

#include "htsgd/core/vector.hpp"

namespace htsgd {

/// Closed convex feasible region with a cheap Euclidean projection.
///
/// Box and interval sets are products of per-coordinate intervals, so the
/// projection is a coordinatewise clamp. The half-line kind is the product
/// {x : x_i >= lower}.
class FeasibleSet {
 public:
  enum class Kind { unconstrained, box, interval, halfline };

  static FeasibleSet unconstrained(int dim);
  /// {x : |x_i| <= radius}; diameter 2 R sqrt(d).
  static FeasibleSet box(int dim, double radius);
  static FeasibleSet interval(int dim, double lo, double hi);
  static FeasibleSet halfline(int dim, double lower);

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  double lower() const noexcept { return lo_; }
  double upper() const noexcept { return hi_; }
  bool bounded() const noexcept { return diameter_.has_value(); }
  std::optional<double> diameter() const noexcept { return diameter_; }

  /// Euclidean-nearest point of the set. Throws ContractViolation on a
  /// dimension mismatch.
  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double slack = 0.0) const;

  std::string describe() const;

 private:
  FeasibleSet(Kind kind, int dim, double lo, double hi, std::optional<double> diameter);

  Kind kind_;
  int dim_;
  double lo_;
  double hi_;
  std::optional<double> diameter_;
};

inline Vector project(const FeasibleSet& set, const Vector& x) { return set.project(x); }

}  // namespace htsgd
