#include "htsgd/core/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "htsgd/core/errors.hpp"

namespace htsgd {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FeasibleSet::FeasibleSet(Kind kind, int dim, double lo, double hi, std::optional<double> diameter)
    : kind_(kind), dim_(dim), lo_(lo), hi_(hi), diameter_(diameter) {
  require(dim >= 1, "FeasibleSet: dimension must be at least 1");
}

FeasibleSet FeasibleSet::unconstrained(int dim) {
  return FeasibleSet(Kind::unconstrained, dim, -kInf, kInf, std::nullopt);
}

FeasibleSet FeasibleSet::box(int dim, double radius) {
  require(radius > 0.0 && std::isfinite(radius), "FeasibleSet::box: radius must be positive");
  return FeasibleSet(Kind::box, dim, -radius, radius, 2.0 * radius * std::sqrt(double(dim)));
}

FeasibleSet FeasibleSet::interval(int dim, double lo, double hi) {
  require(lo <= hi && std::isfinite(lo) && std::isfinite(hi),
          "FeasibleSet::interval: need finite lo <= hi");
  std::optional<double> diam;
  if (hi > lo) diam = (hi - lo) * std::sqrt(double(dim));
  else diam = 0.0;
  return FeasibleSet(Kind::interval, dim, lo, hi, diam);
}

FeasibleSet FeasibleSet::halfline(int dim, double lower) {
  require(std::isfinite(lower), "FeasibleSet::halfline: bound must be finite");
  return FeasibleSet(Kind::halfline, dim, lower, kInf, std::nullopt);
}

Vector FeasibleSet::project(const Vector& x) const {
  require(x.size() == dim_, "project: dimension mismatch (set has dim " + std::to_string(dim_) +
                                ", point has dim " + std::to_string(x.size()) + ")");
  if (kind_ == Kind::unconstrained) return x;
  Vector y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i], lo_, hi_);
  return y;
}

bool FeasibleSet::contains(const Vector& x, double slack) const {
  if (x.size() != dim_) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lo_ - slack || x[i] > hi_ + slack) return false;
  }
  return true;
}

std::string FeasibleSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::unconstrained: os << "unconstrained"; break;
    case Kind::box: os << "box(R=" << hi_ << ")"; break;
    case Kind::interval: os << "interval[" << lo_ << "," << hi_ << "]"; break;
    case Kind::halfline: os << "halfline[" << lo_ << ",inf)"; break;
  }
  os << " d=" << dim_;
  return os.str();
}

}  // namespace htsgd
