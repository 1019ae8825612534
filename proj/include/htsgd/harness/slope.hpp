#pragma once

#include <stdexcept>
#include <vector>

namespace htsgd {

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SlopeFit {
  std::vector<double> grid;    // points kept in the fit
  std::vector<double> values;
  std::vector<double> dropped; // grid points whose value was not positive
  double slope = 0.0;
  double intercept = 0.0;      // in log space
  double residual = 0.0;       // root-mean-square residual in log space
};

/// Ordinary least squares of log(value) on log(grid). Non-positive values are
/// dropped and recorded; fewer than four survivors raise FitError.
SlopeFit fit_rate_slope(const std::vector<double>& grid, const std::vector<double>& values);

}  // namespace htsgd
